#include "cvxs/table.hpp"

#include <cmath>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"

namespace cvxs {

Table::Table(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
    schema_.validate();
    if (columns_.size() != schema_.features.size()) {
        fail("ParseError", "column count does not match schema");
    }
    rows_ = columns_.empty()
                ? 0
                : std::visit([](const auto& v) { return v.size(); }, columns_[0]);

    for (std::size_t j = 0; j < columns_.size(); ++j) {
        auto& spec = schema_.features[j];
        const std::size_t len =
            std::visit([](const auto& v) { return v.size(); }, columns_[j]);
        if (len != rows_) fail("ParseError", "ragged columns");

        if (spec.is_categorical()) {
            const auto* codes = std::get_if<std::vector<std::int32_t>>(&columns_[j]);
            if (!codes) fail("ParseError", "column type mismatch for '" + spec.name + "'");
            for (const auto code : *codes) {
                if (code < 0 || code >= spec.category_count()) {
                    fail("UnknownCategory",
                         "category code out of range in '" + spec.name + "'");
                }
            }
        } else {
            const auto* vals = std::get_if<std::vector<double>>(&columns_[j]);
            if (!vals) fail("ParseError", "column type mismatch for '" + spec.name + "'");
            double lo = 0.0, hi = 0.0;
            bool first = true;
            for (const auto v : *vals) {
                if (!std::isfinite(v)) {
                    fail("MissingValue", "non-finite value in '" + spec.name + "'");
                }
                if (first) {
                    lo = hi = v;
                    first = false;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            spec.observed_min = lo;
            spec.observed_max = hi;
        }
    }
}

const std::vector<double>& Table::continuous(std::size_t col) const {
    return std::get<std::vector<double>>(columns_[col]);
}

const std::vector<std::int32_t>& Table::categories(std::size_t col) const {
    return std::get<std::vector<std::int32_t>>(columns_[col]);
}

std::string Table::cell_text(std::size_t row, std::size_t col) const {
    const auto& spec = schema_.features[col];
    if (spec.is_categorical()) {
        return spec.categories[static_cast<std::size_t>(category_at(row, col))];
    }
    return format_double(continuous_at(row, col));
}

std::vector<std::size_t> Table::target_class_counts() const {
    const auto t = schema_.target_index();
    std::vector<std::size_t> counts(schema_.features[t].categories.size(), 0);
    for (const auto code : categories(t)) {
        counts[static_cast<std::size_t>(code)]++;
    }
    return counts;
}

Table Table::select_rows(const std::vector<std::size_t>& rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& column : columns_) {
        cols.push_back(std::visit(
            [&](const auto& src) -> Column {
                std::decay_t<decltype(src)> out;
                out.reserve(rows.size());
                for (const auto r : rows) out.push_back(src[r]);
                return out;
            },
            column));
    }
    return Table(schema_, std::move(cols));
}

bool Table::operator==(const Table& other) const {
    return schema_.same_structure(other.schema_) && columns_ == other.columns_;
}

TableBuilder::TableBuilder(Schema schema) : schema_(std::move(schema)) {
    schema_.validate();
    columns_.reserve(schema_.features.size());
    for (const auto& f : schema_.features) {
        if (f.is_categorical()) {
            columns_.emplace_back(std::vector<std::int32_t>{});
        } else {
            columns_.emplace_back(std::vector<double>{});
        }
    }
}

void TableBuilder::append_continuous(std::size_t col, double value) {
    std::get<std::vector<double>>(columns_[col]).push_back(value);
}

void TableBuilder::append_category(std::size_t col, std::int32_t code) {
    std::get<std::vector<std::int32_t>>(columns_[col]).push_back(code);
}

void TableBuilder::append_category_label(std::size_t col, const std::string& label) {
    const auto& spec = schema_.features[col];
    for (std::int32_t c = 0; c < spec.category_count(); ++c) {
        if (spec.categories[static_cast<std::size_t>(c)] == label) {
            append_category(col, c);
            return;
        }
    }
    fail("UnknownCategory",
         "value '" + label + "' not a category of feature '" + spec.name + "'");
}

Table TableBuilder::build() && {
    return Table(std::move(schema_), std::move(columns_));
}

} // namespace cvxs
