#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cvxs/schema.hpp"

namespace cvxs {

/// Column storage: continuous columns hold doubles, categorical columns hold
/// indices into the feature's category list.
using Column = std::variant<std::vector<double>, std::vector<std::int32_t>>;

/// An in-memory typed table. Immutable after construction. Construction
/// validates every value against the schema (category indices in range,
/// finite continuous values, equal column lengths) and records per-column
/// observed min/max for continuous features in its schema copy.
class Table {
public:
    Table() = default;
    Table(Schema schema, std::vector<Column> columns);

    const Schema& schema() const noexcept { return schema_; }
    std::size_t row_count() const noexcept { return rows_; }
    std::size_t feature_count() const noexcept { return schema_.features.size(); }

    const std::vector<double>& continuous(std::size_t col) const;
    const std::vector<std::int32_t>& categories(std::size_t col) const;

    double continuous_at(std::size_t row, std::size_t col) const {
        return continuous(col)[row];
    }
    std::int32_t category_at(std::size_t row, std::size_t col) const {
        return categories(col)[row];
    }
    /// Raw value rendered as text (category label or shortest decimal).
    std::string cell_text(std::size_t row, std::size_t col) const;

    std::int32_t target_class(std::size_t row) const {
        return category_at(row, schema_.target_index());
    }
    /// Rows per target class, indexed by category code.
    std::vector<std::size_t> target_class_counts() const;

    /// New table holding the given rows, in the given order.
    Table select_rows(const std::vector<std::size_t>& rows) const;

    /// Exact raw equality: same structure, same values (doubles bitwise).
    bool operator==(const Table& other) const;

private:
    Schema schema_;
    std::vector<Column> columns_;
    std::size_t rows_ = 0;
};

/// Builder used by loaders and generators: accumulate raw cells row by row,
/// then finalize into a validated Table.
class TableBuilder {
public:
    explicit TableBuilder(Schema schema);

    void append_continuous(std::size_t col, double value);
    void append_category(std::size_t col, std::int32_t code);
    /// Looks the label up in the feature's category list.
    /// Throws Error("UnknownCategory") when absent.
    void append_category_label(std::size_t col, const std::string& label);

    Table build() &&;

private:
    Schema schema_;
    std::vector<Column> columns_;
};

} // namespace cvxs
