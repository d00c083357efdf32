#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mln/model.hpp"

namespace mln {

struct Issue {
    std::string code;
    std::string path;  // JSON pointer into the input document
    std::string message;
};

enum class FlagSource { explicit_flag, per_link, default_value };
std::string_view to_string(FlagSource s);

struct NormalizedFlags {
    bool directed = false;
    bool directed_interlayer = false;
    FlagSource inferred_from = FlagSource::default_value;
};

struct ValidationReport {
    std::vector<Issue> errors;
    std::vector<Issue> warnings;
    NormalizedFlags flags;

    bool ok() const { return errors.empty(); }
    bool has_error(std::string_view code) const;
    bool has_warning(std::string_view code) const;
};

/// Outcome of a parse: a snapshot exactly when the report has no errors.
struct IngestResult {
    std::optional<NetworkSnapshot> snapshot;
    ValidationReport report;

    bool ok() const { return snapshot.has_value(); }
};

struct PerLinkFlag {
    LinkClass link = LinkClass::intralayer;
    std::optional<bool> directed;
};

struct DirectednessResult {
    NormalizedFlags flags;
    std::vector<Issue> warnings;
};

/// Resolves the two directedness flags.
///
/// An explicit value wins; a missing flag is inferred true when any link of its
/// class carries directed=true, and false otherwise. directed=true always
/// forces directed_interlayer=true, with a warning if that overrides an
/// explicit false.
DirectednessResult normalize_directedness(std::optional<bool> directed,
                                          std::optional<bool> directed_interlayer,
                                          std::span<const PerLinkFlag> per_link);

/// Parses the four-array JSON network document.
IngestResult parse_json(std::string_view document);

struct CsvTables {
    std::string edges;
    std::optional<std::string> layers;
    std::optional<std::string> nodes;
    std::optional<std::string> state_nodes;
    // One row with optional directed / directed_interlayer cells. Carries the
    // flags when no per-link column can, e.g. for a network without interlayer links.
    std::optional<std::string> network;
};

/// Parses the CSV form. Missing auxiliary tables are synthesized from the edge
/// endpoints in order of first appearance; the tables are then assembled into
/// the JSON document model and validated by the same path as parse_json. An
/// empty edges table is rejected unless a state_nodes table is given.
IngestResult parse_csv(const CsvTables& tables);

/// Emits the four-array schema with both flags explicit, in snapshot order.
std::string serialize_json(const NetworkSnapshot& snapshot, int indent = 2);

/// Order-independent form: nodes sorted by id, state nodes by (layer, node id),
/// undirected edges with sorted endpoints and edges sorted by key; per-link
/// directed hints are dropped. Two snapshots are semantically equal iff their
/// canonical forms match byte for byte.
std::string canonical_json(const NetworkSnapshot& snapshot);

bool semantically_equal(const NetworkSnapshot& a, const NetworkSnapshot& b);

/// The CSV form of a snapshot, the inverse of parse_csv. Directedness is
/// carried in a per-link directed column.
CsvTables serialize_csv(const NetworkSnapshot& snapshot);

/// Loads a network from disk by extension: .json, or .csv with optional
/// sibling tables <stem>.layers.csv, <stem>.nodes.csv, <stem>.state_nodes.csv.
/// Throws mln::Error("io-error") when the file cannot be read.
IngestResult load_network_file(const std::string& path);

/// Writes JSON, or the CSV edge table plus its three sibling tables, by the
/// extension of path. Throws mln::Error("io-error").
void save_network_file(const NetworkSnapshot& snapshot, const std::string& path);

}  // namespace mln
