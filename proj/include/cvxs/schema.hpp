#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cvxs {

enum class FeatureKind { continuous, ordinal, nominal };

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& text);

/// One column's declaration. For ordinal features the category list order is
/// the rank order; for nominal features it fixes the code assignment
/// (declaration order, independent of data order). observed_min/max are
/// filled from data when a Table is constructed.
struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::continuous;
    std::vector<std::string> categories;   // ordinal/nominal only
    double observed_min = 0.0;             // continuous only
    double observed_max = 0.0;

    bool is_categorical() const noexcept { return kind != FeatureKind::continuous; }
    std::int32_t category_count() const noexcept {
        return static_cast<std::int32_t>(categories.size());
    }
};

struct Schema {
    std::vector<FeatureSpec> features;
    std::string target;                      // name of a nominal/ordinal feature
    std::vector<std::string> quasi_identifiers;

    std::size_t feature_count() const noexcept { return features.size(); }
    /// Index of a feature by name; nullopt when absent.
    std::optional<std::size_t> index_of(const std::string& name) const;
    std::size_t target_index() const;
    bool is_quasi_identifier(const std::string& name) const;

    /// Enforces the structural invariants (unique names, valid target,
    /// quasi-identifiers a subset excluding the target, category lists
    /// non-empty and duplicate-free). Throws Error("SchemaParse") otherwise.
    void validate() const;

    /// Structural equality: names, kinds, category lists, target, QIs.
    /// Observed ranges are data-derived and intentionally excluded.
    bool same_structure(const Schema& other) const;
};

/// Strict JSON schema file loader. Unknown keys are rejected.
Schema load_schema(const std::string& path);
Schema parse_schema_json(const std::string& text);
std::string schema_to_json(const Schema& schema);
void save_schema(const Schema& schema, const std::string& path);

} // namespace cvxs
