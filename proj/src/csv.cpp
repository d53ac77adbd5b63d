#include "cvxs/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cvxs/error.hpp"

namespace cvxs {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path, const std::string& missing_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(missing_code, "cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write '" + path + "'");
    out << content;
    if (!out) fail("IoError", "write failed for '" + path + "'");
}

namespace {

/// One pass of an RFC-4180 state machine. Quoted fields may contain commas,
/// doubled quotes and newlines. Accepts \n and \r\n records.
std::vector<std::vector<std::string>> parse_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    const auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) fail("ParseError", "stray quote inside CSV field");
                in_quotes = true;
                field_was_quoted = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break; // consumed below
                end_record();
                break;
            case '\n': end_record(); break;
            default: field.push_back(c); break;
        }
    }
    if (in_quotes) fail("ParseError", "unterminated quoted CSV field");
    if (!field.empty() || field_was_quoted || !record.empty()) end_record();
    return records;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

void append_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out.push_back('"');
    for (const char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

double parse_double_cell(const std::string& cell, std::size_t row,
                         const std::string& feature) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        fail("ParseError", "row " + std::to_string(row) + ", feature '" + feature +
                               "': cannot parse number from '" + cell + "'");
    }
    return value;
}

} // namespace

Table parse_csv(const std::string& text, const Schema& schema) {
    const auto records = parse_records(text);
    if (records.empty()) fail("ParseError", "CSV has no header row");

    const auto& header = records[0];
    std::vector<std::size_t> file_col(schema.features.size());
    for (std::size_t j = 0; j < schema.features.size(); ++j) {
        const auto& name = schema.features[j].name;
        std::size_t found = header.size();
        for (std::size_t h = 0; h < header.size(); ++h) {
            if (header[h] == name) {
                if (found != header.size()) {
                    fail("ParseError", "duplicate CSV column '" + name + "'");
                }
                found = h;
            }
        }
        if (found == header.size()) fail("MissingColumn", "CSV lacks column '" + name + "'");
        file_col[j] = found;
    }

    TableBuilder builder(schema);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.size() != header.size()) {
            fail("ParseError", "row " + std::to_string(r) + " has " +
                                   std::to_string(record.size()) + " fields, header has " +
                                   std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < schema.features.size(); ++j) {
            const auto& spec = schema.features[j];
            const auto& cell = record[file_col[j]];
            if (cell.empty()) {
                fail("MissingValue",
                     "row " + std::to_string(r) + ", feature '" + spec.name + "'");
            }
            if (spec.is_categorical()) {
                builder.append_category_label(j, cell);
            } else {
                builder.append_continuous(j, parse_double_cell(cell, r, spec.name));
            }
        }
    }
    return std::move(builder).build();
}

Table load_csv(const std::string& path, const Schema& schema) {
    return parse_csv(read_text_file(path, "FileNotFound"), schema);
}

std::string table_to_csv(const Table& table) {
    std::string out;
    const auto& features = table.schema().features;
    for (std::size_t j = 0; j < features.size(); ++j) {
        if (j > 0) out.push_back(',');
        append_field(out, features[j].name);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t j = 0; j < features.size(); ++j) {
            if (j > 0) out.push_back(',');
            append_field(out, table.cell_text(r, j));
        }
        out.push_back('\n');
    }
    return out;
}

void save_csv(const Table& table, const std::string& path) {
    write_text_file(path, table_to_csv(table));
}

Matrix load_matrix_csv(const std::string& path) {
    const auto records = parse_records(read_text_file(path, "FileNotFound"));
    if (records.empty()) fail("ParseError", "empty embedding file");
    const std::size_t cols = records[0].size();
    Matrix m(records.size(), cols);
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].size() != cols) fail("ParseError", "ragged embedding file");
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = parse_double_cell(records[r][c], r, "embedding");
        }
    }
    return m;
}

} // namespace cvxs
