#include "sectionfile.hpp"

#include <cstdlib>
#include <fstream>

namespace mosizer::detail {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<Section> read_sections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<Section> sections;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(path + ":" + std::to_string(lineno) + ": unterminated section header");
            Section s;
            s.name = trim(line.substr(1, line.size() - 2));
            s.line = lineno;
            if (s.name.empty())
                throw ParseError(path + ":" + std::to_string(lineno) + ": empty section name");
            sections.push_back(std::move(s));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        if (sections.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": entry before any section");
        SectionEntry e;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
        sections.back().entries.push_back(std::move(e));
    }
    return sections;
}

double parse_number(const std::string& text, std::size_t line, const std::string& field) {
    const std::string t = trim(text);
    if (t.empty())
        throw ParseError("line " + std::to_string(line) + ": empty value for " + field);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ParseError("line " + std::to_string(line) + ": bad number '" + t + "' for " + field);
    return v;
}

std::vector<double> parse_number_list(const std::string& text, std::size_t line,
                                      const std::string& field) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        const std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_number(piece, line, field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_numbers(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += format_exact(vs[i]);
    }
    return out;
}

} // namespace mosizer::detail
