#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simsketch/multiset.hpp"

namespace simsketch {

/// Two multisets to compare, with a stable identifier.
struct MultisetPair {
    std::string id;
    Multiset first;
    Multiset second;
};

// ---------------------------------------------------------------------------
// Synthetic corpus

struct SyntheticOptions {
    std::uint64_t seed = 0;
    std::size_t pair_count = 1001;
    std::size_t target_unique = 67;
    std::size_t string_length = 10;
};

struct SyntheticPair {
    std::size_t index = 0;
    Multiset other;
    double target_dice = 0.0;
    double exact_dice = 0.0;  // recomputed by dice(base, other)
};

/// One reference multiset plus companions of equal cardinality T whose Dice
/// against the reference steps from 0 to 1.
struct SyntheticCorpus {
    Multiset base;
    std::vector<SyntheticPair> pairs;

    /// Pair i has id "sd-NNNN", first = base, second = pairs[i].other.
    std::vector<MultisetPair> as_pairs() const;
};

/// Builds the corpus deterministically from `opts.seed`.
///
/// The reference holds `target_unique` random printable-ASCII strings whose
/// counts are drawn so that T >= ceil(pair_count / 2). Companion i targets
/// t = i / (pair_count - 1) (t = 1 when pair_count == 1): it takes floor(t*T)
/// units of the reference's mass and pads to T with fresh strings.
/// Throws std::invalid_argument for zero sizes and GenerationError when the
/// string space is too small for the fresh strings required.
SyntheticCorpus generate_synthetic(const SyntheticOptions& opts);

/// Options for listener-like pairs: skewed song popularity, mostly small
/// play counts, and overlap fractions spread over [0, 1].
struct ListenerPairOptions {
    std::uint64_t seed = 0;
    std::size_t pair_count = 500;
    std::size_t song_pool = 20000;
    std::size_t min_distinct = 50;
    std::size_t max_distinct = 80;
};

std::vector<MultisetPair> generate_listener_pairs(const ListenerPairOptions& opts);

// ---------------------------------------------------------------------------
// Listening history triplets

struct ListeningRecord {
    std::string user;
    std::string song;
    std::uint64_t play_count = 0;

    friend bool operator==(const ListeningRecord&, const ListeningRecord&) = default;
};

struct IngestResult {
    std::vector<ListeningRecord> records;  // first-seen order, duplicates merged
    std::vector<std::string> warnings;
};

/// Parses tab-separated `user \t song \t count` lines. Blank lines and a
/// trailing '\r' are ignored. Repeated (user, song) lines are summed with a
/// warning. Throws ParseError naming the 1-based line on malformed input.
IngestResult ingest_triplets(std::istream& in);

/// Reads a triplet file, transparently gunzipping it when it starts with the
/// gzip magic. Throws Error on I/O failure.
IngestResult ingest_triplet_file(const std::filesystem::path& path);

using ProfileMap = std::map<std::string, Multiset>;

/// One multiset per user (song -> plays), keeping users with at least
/// `min_distinct` distinct songs.
ProfileMap build_user_profiles(const std::vector<ListeningRecord>& records,
                               std::size_t min_distinct);

struct ProfileSummary {
    std::size_t users = 0;
    std::size_t distinct_songs = 0;
    std::uint64_t total_plays = 0;
    double mean_distinct = 0.0;
};

ProfileSummary summarize(const ProfileMap& profiles);

/// Writes profiles back as triplets, users and songs in sorted order.
void write_profiles_tsv(std::ostream& out, const ProfileMap& profiles);

ProfileMap read_profiles_tsv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Corpus manifest (JSON; schema in docs/formats.md)

struct ManifestEntry {
    std::string id;
    std::string first;
    std::string second;
    std::optional<double> target_dice;
    double exact_dice = 0.0;
    std::size_t first_distinct = 0;
    std::size_t second_distinct = 0;
    std::uint64_t first_cardinality = 0;
    std::uint64_t second_cardinality = 0;
};

struct CorpusManifest {
    std::string profiles_file;  // relative to the manifest's directory
    std::vector<ManifestEntry> pairs;
};

/// Writes profiles.tsv and manifest.json for a synthetic corpus into `dir`.
CorpusManifest write_synthetic_corpus(const SyntheticCorpus& corpus,
                                      const std::filesystem::path& dir);

/// Manifest over chosen user pairs of an ingested profile map.
CorpusManifest make_profile_manifest(const ProfileMap& profiles,
                                     const std::vector<std::pair<std::string, std::string>>& pairs,
                                     std::string profiles_file);

/// Picks up to `count` distinct unordered user pairs; all pairs when fewer exist.
std::vector<std::pair<std::string, std::string>> sample_user_pairs(const ProfileMap& profiles,
                                                                   std::size_t count,
                                                                   std::uint64_t seed);

void write_manifest(std::ostream& out, const CorpusManifest& manifest);
CorpusManifest read_manifest(std::istream& in);

/// Loads a manifest and its profiles file into comparison pairs.
std::vector<MultisetPair> load_corpus(const std::filesystem::path& manifest_path);

}  // namespace simsketch
