#pragma once

// Internal reader/writer helpers for the line-oriented section files
// (coefficient bundles and design plans) and for exact decimal formatting.

#include <cstdio>
#include <string>
#include <vector>

#include "mosizer/errors.hpp"

namespace mosizer::detail {

struct SectionEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<SectionEntry> entries;
};

std::string trim(const std::string& s);

/// Reads "[section]" / "key = value" lines; '#' starts a comment.
/// Throws ParseError with line numbers on anything else.
std::vector<Section> read_sections(const std::string& path);

double parse_number(const std::string& text, std::size_t line, const std::string& field);

std::vector<double> parse_number_list(const std::string& text, std::size_t line,
                                      const std::string& field);

/// Formats with 17 significant digits so the value reparses exactly.
std::string format_exact(double v);

std::string join_numbers(const std::vector<double>& vs);

} // namespace mosizer::detail
