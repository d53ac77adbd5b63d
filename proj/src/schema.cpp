#include "cvxs/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"

namespace cvxs {

using nlohmann::json;

const char* to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::continuous: return "continuous";
        case FeatureKind::ordinal: return "ordinal";
        case FeatureKind::nominal: return "nominal";
    }
    return "?";
}

FeatureKind feature_kind_from_string(const std::string& text) {
    if (text == "continuous") return FeatureKind::continuous;
    if (text == "ordinal") return FeatureKind::ordinal;
    if (text == "nominal") return FeatureKind::nominal;
    fail("SchemaParse", "unknown feature kind '" + text + "'");
}

std::optional<std::size_t> Schema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Schema::target_index() const {
    const auto idx = index_of(target);
    if (!idx) fail("SchemaParse", "target feature '" + target + "' not in schema");
    return *idx;
}

bool Schema::is_quasi_identifier(const std::string& name) const {
    for (const auto& qi : quasi_identifiers) {
        if (qi == name) return true;
    }
    return false;
}

void Schema::validate() const {
    std::set<std::string> names;
    for (const auto& f : features) {
        if (f.name.empty()) fail("SchemaParse", "feature with empty name");
        if (!names.insert(f.name).second) {
            fail("SchemaParse", "duplicate feature name '" + f.name + "'");
        }
        if (f.is_categorical()) {
            if (f.categories.empty()) {
                fail("SchemaParse", "feature '" + f.name + "' needs a category list");
            }
            std::set<std::string> cats(f.categories.begin(), f.categories.end());
            if (cats.size() != f.categories.size()) {
                fail("SchemaParse", "feature '" + f.name + "' has duplicate categories");
            }
        } else if (!f.categories.empty()) {
            fail("SchemaParse",
                 "continuous feature '" + f.name + "' must not declare categories");
        }
    }
    const auto target_idx = index_of(target);
    if (!target_idx) fail("SchemaParse", "target '" + target + "' not among features");
    if (!features[*target_idx].is_categorical()) {
        fail("SchemaParse", "target '" + target + "' must be ordinal or nominal");
    }
    std::set<std::string> qi_seen;
    for (const auto& qi : quasi_identifiers) {
        if (!index_of(qi)) fail("SchemaParse", "quasi-identifier '" + qi + "' not a feature");
        if (qi == target) fail("SchemaParse", "target cannot be a quasi-identifier");
        if (!qi_seen.insert(qi).second) {
            fail("SchemaParse", "duplicate quasi-identifier '" + qi + "'");
        }
    }
}

bool Schema::same_structure(const Schema& other) const {
    if (features.size() != other.features.size() || target != other.target ||
        quasi_identifiers != other.quasi_identifiers) {
        return false;
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& a = features[i];
        const auto& b = other.features[i];
        if (a.name != b.name || a.kind != b.kind || a.categories != b.categories) {
            return false;
        }
    }
    return true;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key())) {
            fail("SchemaParse", "unknown key '" + it.key() + "' in " + where);
        }
    }
}

} // namespace

Schema parse_schema_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail("SchemaParse", std::string("invalid schema JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("SchemaParse", "schema root must be an object");
    reject_unknown_keys(doc, {"features", "target", "quasi_identifiers"}, "schema");
    if (!doc.contains("features") || !doc["features"].is_array()) {
        fail("SchemaParse", "schema needs a 'features' array");
    }
    if (!doc.contains("target") || !doc["target"].is_string()) {
        fail("SchemaParse", "schema needs a 'target' string");
    }

    Schema schema;
    for (const auto& fj : doc["features"]) {
        if (!fj.is_object()) fail("SchemaParse", "feature entries must be objects");
        reject_unknown_keys(fj, {"name", "kind", "categories"}, "feature");
        if (!fj.contains("name") || !fj["name"].is_string() || !fj.contains("kind") ||
            !fj["kind"].is_string()) {
            fail("SchemaParse", "each feature needs 'name' and 'kind' strings");
        }
        FeatureSpec spec;
        spec.name = fj["name"].get<std::string>();
        spec.kind = feature_kind_from_string(fj["kind"].get<std::string>());
        if (fj.contains("categories")) {
            if (!fj["categories"].is_array()) {
                fail("SchemaParse", "'categories' must be an array of strings");
            }
            for (const auto& c : fj["categories"]) {
                if (!c.is_string()) {
                    fail("SchemaParse", "'categories' must be an array of strings");
                }
                spec.categories.push_back(c.get<std::string>());
            }
        }
        schema.features.push_back(std::move(spec));
    }
    schema.target = doc["target"].get<std::string>();
    if (doc.contains("quasi_identifiers")) {
        if (!doc["quasi_identifiers"].is_array()) {
            fail("SchemaParse", "'quasi_identifiers' must be an array of strings");
        }
        for (const auto& q : doc["quasi_identifiers"]) {
            if (!q.is_string()) {
                fail("SchemaParse", "'quasi_identifiers' must be an array of strings");
            }
            schema.quasi_identifiers.push_back(q.get<std::string>());
        }
    }
    schema.validate();
    return schema;
}

Schema load_schema(const std::string& path) {
    return parse_schema_json(read_text_file(path, "SchemaNotFound"));
}

std::string schema_to_json(const Schema& schema) {
    json doc;
    doc["features"] = json::array();
    for (const auto& f : schema.features) {
        json fj;
        fj["name"] = f.name;
        fj["kind"] = to_string(f.kind);
        if (f.is_categorical()) fj["categories"] = f.categories;
        doc["features"].push_back(std::move(fj));
    }
    doc["target"] = schema.target;
    doc["quasi_identifiers"] = schema.quasi_identifiers;
    return doc.dump(2) + "\n";
}

void save_schema(const Schema& schema, const std::string& path) {
    write_text_file(path, schema_to_json(schema));
}

} // namespace cvxs
