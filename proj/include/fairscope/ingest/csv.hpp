#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fairscope/error.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/ingest/schema.hpp"

namespace fairscope {

namespace csv_detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Splits one record. Double-quoted fields may contain commas; "" escapes a
/// quote. Cells are whitespace-trimmed.
inline std::vector<std::string> split_record(std::string_view line)
{
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.emplace_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.emplace_back(trim(cell));
    return cells;
}

inline bool parse_double(std::string_view text, double& out)
{
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

inline std::string quote_if_needed(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out.push_back(ch);
        }
    }
    out += '"';
    return out;
}

}  // namespace csv_detail

/// Shortest text that parses back to exactly `value`; locale independent.
inline std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

/// Fixed-point text with `decimals` places; locale independent.
inline std::string format_fixed(double value, int decimals)
{
    char buf[128];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

/// Parses CSV text into a raw Frame typed per `schema`. No preprocessing:
/// categorical cells keep their labels and numeric missing markers become NaN.
inline Frame parse_csv(std::istream& in, const Schema& schema, const std::string& source = "<stream>")
{
    schema.validate();
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!csv_detail::trim(line).empty()) {
                return true;
            }
        }
        return false;
    };
    if (!next_line()) {
        throw DataError(source + ": file is empty");
    }

    // position in file -> schema column index
    std::vector<std::size_t> layout;
    auto first = csv_detail::split_record(line);
    std::set<std::string> header_set(first.begin(), first.end());
    std::set<std::string> schema_set;
    for (const auto& c : schema.columns) {
        schema_set.insert(c.name);
    }
    bool first_is_data = false;
    if (header_set == schema_set && first.size() == schema.columns.size()) {
        for (const auto& name : first) {
            for (std::size_t k = 0; k < schema.columns.size(); ++k) {
                if (schema.columns[k].name == name) {
                    layout.push_back(k);
                }
            }
        }
    } else if (schema.headerless_ok && first.size() == schema.columns.size()
               && std::none_of(first.begin(), first.end(),
                               [&](const std::string& cell) { return schema_set.count(cell) > 0; })) {
        for (std::size_t k = 0; k < schema.columns.size(); ++k) {
            layout.push_back(k);
        }
        first_is_data = true;
    } else {
        std::string missing;
        for (const auto& name : schema_set) {
            if (!header_set.count(name)) {
                missing += (missing.empty() ? "" : ", ") + name;
            }
        }
        std::string extra;
        for (const auto& name : header_set) {
            if (!schema_set.count(name)) {
                extra += (extra.empty() ? "" : ", ") + name;
            }
        }
        throw DataError(source + ": header does not match schema (missing: [" + missing + "], unexpected: [" + extra
                        + "])");
    }

    Frame frame;
    frame.target_name = schema.target().name;
    // schema column index -> frame column index (or npos for the target)
    constexpr auto npos = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> slot(schema.columns.size(), npos);
    for (std::size_t k = 0; k < schema.columns.size(); ++k) {
        const auto& spec = schema.columns[k];
        if (spec.kind == ColumnKind::target) {
            continue;
        }
        slot[k] = frame.columns.size();
        frame.columns.push_back(Column{spec.name, spec.kind, {}, {}});
    }

    auto consume = [&](const std::vector<std::string>& cells) {
        if (cells.size() != schema.columns.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(schema.columns.size())
                            + " cells, found " + std::to_string(cells.size()));
        }
        for (std::size_t pos = 0; pos < cells.size(); ++pos) {
            const auto& spec = schema.columns[layout[pos]];
            const auto& cell = cells[pos];
            if (spec.kind == ColumnKind::numeric || spec.kind == ColumnKind::target) {
                double v = std::numeric_limits<double>::quiet_NaN();
                if (!spec.is_missing(cell)) {
                    if (!csv_detail::parse_double(cell, v)) {
                        throw DataError(source + ":" + std::to_string(line_no) + ": column '" + spec.name
                                        + "': cannot parse '" + cell + "' as a number");
                    }
                }
                if (spec.kind == ColumnKind::target) {
                    frame.target.push_back(v);
                } else {
                    frame.columns[slot[layout[pos]]].values.push_back(v);
                }
            } else {
                frame.columns[slot[layout[pos]]].labels.push_back(cell);
            }
        }
    };
    if (first_is_data) {
        consume(first);
    }
    while (next_line()) {
        consume(csv_detail::split_record(line));
    }
    return frame;
}

inline Frame load_csv(const std::filesystem::path& path, const Schema& schema)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open data file " + path.string());
    }
    return parse_csv(in, schema, path.string());
}

/// Writes feature columns (frame order) then the target. Encoded values use
/// shortest round-trip formatting; unencoded categoricals write their labels.
inline void write_csv(const Frame& frame, std::ostream& out)
{
    for (const auto& c : frame.columns) {
        out << csv_detail::quote_if_needed(c.name) << ',';
    }
    out << csv_detail::quote_if_needed(frame.target_name) << '\n';
    for (std::size_t i = 0; i < frame.n_rows(); ++i) {
        for (const auto& c : frame.columns) {
            if (c.encoded()) {
                out << format_double(c.values[i]);
            } else {
                out << csv_detail::quote_if_needed(c.labels[i]);
            }
            out << ',';
        }
        out << format_double(frame.target[i]) << '\n';
    }
}

inline void write_csv(const Frame& frame, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write_csv(frame, out);
}

}  // namespace fairscope
