#pragma once

// Knowledge base: reusable elements kept in a line-oriented store file.
//
// Store line:
//   entry <id> name="..." type=<token> year=<nat> prop.<key>=<value>[unit]* provenance="model@timestamp"
// Lines starting with `#` and blank lines are ignored.
//
//   R-401  error    knowledge reference resolves neither in the store nor inline
//   I-401  info     referenced entry becomes available after the target year
//   W-401  warning  extracted element has no `year` property

#include "imog/diagnostic.hpp"
#include "imog/model.hpp"

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imog {

struct Provenance {
    std::string model;
    std::string timestamp;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct KnowledgeEntry {
    ElementId id;
    std::string name;
    std::string type;
    int year_available = 0;
    std::vector<Property> properties;
    Provenance provenance;

    friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

inline constexpr int earliest_year = 1900;

/// Default store path and the environment variable that overrides it.
inline constexpr const char* default_store_path = "./kb.imogkb";
inline constexpr const char* store_env_var = "IMOG_KB";

/// Extraction time and the year used when an element carries none. Honors
/// SOURCE_DATE_EPOCH so runs can be reproduced.
struct Clock {
    std::chrono::system_clock::time_point now;

    static Clock from_environment();
    std::string timestamp() const;  ///< ISO 8601 UTC
    int year() const;
};

struct ExtractResult {
    std::vector<KnowledgeEntry> entries;
    std::vector<Diagnostic> diagnostics;
};

/// Converts blocks, variants and requirements. Throws UnknownElement and
/// KindNotExtractable.
ExtractResult extract(const Model& model, const std::vector<ElementId>& ids, const Clock& clock);

/// One canonical store line, without the newline.
std::string format_entry(const KnowledgeEntry& entry);
/// Parses one store line. Throws StoreCorrupt naming `path` and `line_no`.
KnowledgeEntry parse_entry(std::string_view line, const std::string& path = "<store>",
                           std::size_t line_no = 1);

/// Parses store text, returns entries sorted by id.
std::vector<KnowledgeEntry> parse_store(std::string_view text, const std::string& path = "<store>");
std::string format_store(std::vector<KnowledgeEntry> entries);

/// Loads a store; a missing file is an empty store. Throws StoreCorrupt, IoFailure.
std::vector<KnowledgeEntry> load(const std::string& path);

/// Merges `entries` into the store by id, rewrites it atomically and returns
/// the number of entries now stored.
std::size_t save(const std::string& path, const std::vector<KnowledgeEntry>& entries);

struct KnowledgeQuery {
    std::optional<std::string> type;
    /// Entries available by this roadmap year.
    std::optional<int> max_year;
    std::optional<std::string> property_key;
};

std::vector<KnowledgeEntry> query(std::span<const KnowledgeEntry> entries, const KnowledgeQuery& filter);

/// Inline knowledge entries of the model as store entries.
std::vector<KnowledgeEntry> inline_entries(const Model& model);

/// The `target_year` property of the first strategy element carrying one.
std::optional<int> target_year(const Model& model);

std::vector<Diagnostic> check_kbrefs(const Model& model, std::span<const KnowledgeEntry> store);

} // namespace imog
