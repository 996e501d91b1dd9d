// simsketch: batch front-end for sketch-based multiset similarity.
//
// Exit codes: 0 success, 1 data error, 2 compatibility error, 64 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "simsketch/datasets.hpp"
#include "simsketch/errors.hpp"
#include "simsketch/experiments.hpp"
#include "simsketch/metrics.hpp"
#include "simsketch/sketches.hpp"
#include "simsketch/wire.hpp"

namespace fs = std::filesystem;
using namespace simsketch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitIncompatible = 2;
constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

StructureKind parse_kind(const std::string& s) {
    if (s == "bf") return StructureKind::bloom_filter;
    if (s == "cbf") return StructureKind::counting_bloom_filter;
    if (s == "cms") return StructureKind::count_min_sketch;
    throw UsageError("unknown sketch kind '" + s + "'");
}

Metric parse_metric(const std::string& s) {
    if (s == "dice") return Metric::dice;
    if (s == "cosine") return Metric::cosine;
    throw UsageError("unknown metric '" + s + "'");
}

// Flags shared by every subcommand that builds sketches. Defaults are the
// one-hash CBF of length 128.
struct SketchFlags {
    std::string kind = "cbf";
    std::uint32_t width = 128;
    std::uint32_t hashes = 1;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "Sketch kind: cbf, cms or bf")
            ->check(CLI::IsMember({"cbf", "cms", "bf"}))
            ->capture_default_str();
        cmd->add_option("-n,--width", width, "CBF length n or CMS width w")
            ->check(CLI::Range(1U, std::numeric_limits<std::uint32_t>::max()))
            ->capture_default_str();
        cmd->add_option("-k,-d,--hashes,--depth", hashes,
                        "Hash functions k (BF/CBF) or rows d (CMS)")
            ->check(CLI::Range(1U, std::numeric_limits<std::uint32_t>::max()))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Hash seed shared by both peers")->capture_default_str();
    }

    SketchParams params() const { return {parse_kind(kind), width, hashes, seed}; }
};

// Opens `path` for writing, or returns stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw Error("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool is_envelope(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= wire::kMagic.size() &&
           std::equal(wire::kMagic.begin(), wire::kMagic.end(), bytes.begin());
}

Multiset select_profile(const fs::path& path, const std::string& user) {
    const ProfileMap profiles = read_profiles_tsv(path);
    if (user.empty()) {
        if (profiles.size() != 1) {
            throw UsageError(path.string() + " holds " + std::to_string(profiles.size()) +
                             " profiles; pick one with --user");
        }
        return profiles.begin()->second;
    }
    auto it = profiles.find(user);
    if (it == profiles.end()) throw Error("no profile '" + user + "' in " + path.string());
    return it->second;
}

SketchParams params_of(const wire::EnvelopeHeader& h) {
    return {h.kind, h.width, h.kind == StructureKind::count_min_sketch ? h.depth : h.hash_count,
            h.seed};
}

void report_saturation(const Sketch& s, const std::string& what) {
    const bool saturated = std::visit(
        [](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, BloomFilter>) {
                return false;
            } else {
                return v.saturated();
            }
        },
        s);
    if (saturated) std::cerr << "warning: " << what << " has saturated counters\n";
}

// ---------------------------------------------------------------------------

struct GenCommand {
    std::size_t pairs = 1001;
    std::size_t unique = 67;
    std::size_t strlen = 10;
    std::uint64_t seed = 0;
    std::string out;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("gen", "Generate the synthetic comparison corpus");
        cmd->add_option("--pairs", pairs, "Companion multisets (Dice steps)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--unique", unique, "Distinct elements of the reference multiset")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--strlen", strlen, "Length of the random ASCII elements")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
        cmd->add_option("-o,--out", out, "Output directory")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const SyntheticCorpus corpus = generate_synthetic({seed, pairs, unique, strlen});
        const CorpusManifest m = write_synthetic_corpus(corpus, out);
        std::cerr << "wrote " << m.pairs.size() << " pairs to " << out << " (reference: "
                  << corpus.base.distinct_count() << " distinct, cardinality "
                  << corpus.base.cardinality() << ")\n";
    }
};

struct IngestCommand {
    std::string input;
    std::size_t min_distinct = 50;
    std::string profiles_out;
    std::string summary_out = "-";
    std::string manifest_out;
    std::size_t pair_count = 4000;
    std::uint64_t seed = 0;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("ingest", "Parse and filter listening-history triplets");
        cmd->add_option("input", input, "Triplet TSV (user, song, count), optionally gzipped")
            ->required();
        cmd->add_option("--min-distinct", min_distinct,
                        "Drop users with fewer distinct songs")
            ->capture_default_str();
        cmd->add_option("--profiles", profiles_out, "Write the kept profiles as triplet TSV");
        cmd->add_option("--summary", summary_out, "Summary JSON path ('-' for stdout)")
            ->capture_default_str();
        cmd->add_option("--manifest", manifest_out,
                        "Write a corpus manifest over sampled user pairs (needs --profiles)");
        cmd->add_option("--pairs", pair_count, "User pairs to sample for --manifest")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed for pair sampling")->capture_default_str();
        cmd->callback([this] { run(); });
    }

    void run() const {
        if (!manifest_out.empty() && profiles_out.empty()) {
            throw UsageError("--manifest requires --profiles");
        }
        const IngestResult ingest = ingest_triplet_file(input);
        for (const auto& w : ingest.warnings) std::cerr << "warning: " << w << '\n';
        const ProfileMap profiles = build_user_profiles(ingest.records, min_distinct);
        const ProfileSummary s = summarize(profiles);

        if (!profiles_out.empty()) {
            Output out(profiles_out);
            write_profiles_tsv(out.stream(), profiles);
        }
        if (!manifest_out.empty()) {
            const auto pairs = sample_user_pairs(profiles, pair_count, seed);
            const fs::path manifest_path(manifest_out);
            const fs::path rel =
                fs::relative(fs::absolute(profiles_out), fs::absolute(manifest_path).parent_path());
            Output out(manifest_out);
            write_manifest(out.stream(), make_profile_manifest(profiles, pairs, rel.string()));
        }

        nlohmann::ordered_json doc;
        doc["records"] = ingest.records.size();
        doc["min_distinct"] = min_distinct;
        doc["users"] = s.users;
        doc["distinct_songs"] = s.distinct_songs;
        doc["total_plays"] = s.total_plays;
        doc["mean_distinct"] = s.mean_distinct;
        Output out(summary_out);
        out.stream() << doc.dump(2) << '\n';
    }
};

struct SketchCommand {
    std::string profile;
    std::string user;
    std::string out;
    SketchFlags flags;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("sketch", "Encode one profile as a sketch envelope");
        cmd->add_option("profile", profile, "Profile triplet TSV")->required();
        cmd->add_option("--user", user, "Profile to encode when the file holds several");
        cmd->add_option("-o,--out", out, "Envelope output path")->required();
        flags.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const Sketch s = build_sketch(select_profile(profile, user), flags.params());
        report_saturation(s, "sketch");
        const auto bytes = wire::encode(s);
        std::ofstream f(out, std::ios::binary);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        if (!f) throw Error("cannot write " + out);
        std::cout << bytes.size() << '\n';
    }
};

struct CompareCommand {
    std::string a;
    std::string b;
    std::string user_a;
    std::string user_b;
    std::string metric = "dice";
    bool truth = false;
    std::string out = "-";
    SketchFlags flags;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand(
            "compare", "Estimate the similarity of two profiles or sketch envelopes");
        cmd->add_option("a", a, "Profile TSV or envelope")->required();
        cmd->add_option("b", b, "Profile TSV or envelope")->required();
        cmd->add_option("--user-a", user_a, "Profile to use from the first file");
        cmd->add_option("--user-b", user_b, "Profile to use from the second file");
        cmd->add_option("--metric", metric, "dice or cosine")
            ->check(CLI::IsMember({"dice", "cosine"}))
            ->capture_default_str();
        cmd->add_flag("--truth", truth, "Also report the exact value (profile inputs only)");
        cmd->add_option("-o,--out", out, "Report path ('-' for stdout)")->capture_default_str();
        flags.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const auto bytes_a = read_bytes(a);
        const auto bytes_b = read_bytes(b);
        const bool env_a = is_envelope(bytes_a);
        const bool env_b = is_envelope(bytes_b);

        // A profile compared with an envelope is sketched with the envelope's parameters.
        SketchParams params = flags.params();
        if (env_a && env_b) {
            const auto report =
                wire::compatibility_check(wire::decode_header(bytes_a), wire::decode_header(bytes_b));
            if (!report.compatible()) throw IncompatibleSketches(report.mismatched_fields);
        } else if (env_a) {
            params = params_of(wire::decode_header(bytes_a));
        } else if (env_b) {
            params = params_of(wire::decode_header(bytes_b));
        }

        std::optional<Multiset> ma;
        std::optional<Multiset> mb;
        if (!env_a) ma = select_profile(a, user_a);
        if (!env_b) mb = select_profile(b, user_b);
        const Sketch sa = env_a ? wire::decode(bytes_a) : build_sketch(*ma, params);
        const Sketch sb = env_b ? wire::decode(bytes_b) : build_sketch(*mb, params);
        report_saturation(sa, a);
        report_saturation(sb, b);

        const Metric m = parse_metric(metric);
        const double estimate = estimate_similarity(sa, sb, m);
        Output o(out);
        o.stream() << "metric=" << to_string(m) << '\n';
        o.stream() << "estimate=" << format_double(estimate) << '\n';
        if (truth) {
            if (!ma || !mb) throw UsageError("--truth needs two profile inputs");
            const double exact = m == Metric::dice ? dice(*ma, *mb) : cosine(*ma, *mb);
            o.stream() << "truth=" << format_double(exact) << '\n';
            o.stream() << "error=" << format_double(estimate - exact) << '\n';
        }
    }
};

struct GridCommand {
    std::string manifest;
    std::string kind = "cbf";
    std::vector<std::uint32_t> widths{64, 128, 200, 400, 800};
    std::vector<std::uint32_t> depths{1, 2, 4, 8, 10};
    std::string metric = "dice";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("grid", "RMSE sweep over sketch dimensions");
        cmd->add_option("--manifest", manifest, "Corpus manifest")->required();
        cmd->add_option("--kind", kind, "cbf or cms")
            ->check(CLI::IsMember({"cbf", "cms"}))
            ->capture_default_str();
        cmd->add_option("--widths", widths, "Lengths n / widths w")
            ->delimiter(',')
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--depths", depths, "Hash counts k / depths d")
            ->delimiter(',')
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--metric", metric, "dice or cosine")
            ->check(CLI::IsMember({"dice", "cosine"}))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Hash seed")->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
        cmd->add_option("-o,--out", out, "Grid CSV path")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const auto corpus = load_corpus(manifest);
        std::cerr << "grid: " << widths.size() * depths.size() << " cells over "
                  << corpus.size() << " pairs\n";
        const RmseGrid grid =
            run_grid(corpus, {parse_kind(kind), widths, depths, parse_metric(metric), seed},
                     threads);
        for (const auto& f : grid.failures) std::cerr << "cell failure: " << f << '\n';
        Output o(out);
        write_grid_csv(o.stream(), grid);
    }
};

struct PairwiseCommand {
    std::string manifest;
    std::string metric = "dice";
    std::string out;
    std::string threshold_out;
    std::vector<double> thresholds{0.6};
    SketchFlags flags;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand(
            "pairwise", "Per-pair estimates and threshold classification over a corpus");
        cmd->add_option("--manifest", manifest, "Corpus manifest")->required();
        cmd->add_option("--metric", metric, "dice or cosine")
            ->check(CLI::IsMember({"dice", "cosine"}))
            ->capture_default_str();
        cmd->add_option("-o,--out", out, "Comparison CSV path")->required();
        cmd->add_option("--threshold-out", threshold_out, "Threshold report CSV path");
        cmd->add_option("--thresholds", thresholds, "Relevance thresholds in (0,1)")
            ->delimiter(',')
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        flags.attach(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const auto corpus = load_corpus(manifest);
        const PairwiseRun r = run_pairwise(corpus, flags.params(), parse_metric(metric));
        for (const auto& f : r.failures) std::cerr << "pair " << f.pair_id << ": " << f.message << '\n';
        {
            Output o(out);
            write_comparisons_csv(o.stream(), r.results);
        }
        if (!threshold_out.empty()) {
            std::vector<ThresholdReport> reports;
            for (double t : thresholds) {
                if (!(t > 0.0 && t < 1.0)) throw UsageError("thresholds must lie in (0,1)");
                reports.push_back(threshold_report(r.results, t));
            }
            Output o(threshold_out);
            write_threshold_csv(o.stream(), reports);
        }
        if (!r.results.empty()) std::cerr << "rmse " << format_double(rmse(r.results)) << '\n';
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Similarity estimation of multisets via counting Bloom filters and count-min sketches"};
    app.require_subcommand(1);

    GenCommand gen;
    IngestCommand ingest;
    SketchCommand sketch;
    CompareCommand compare;
    GridCommand grid;
    PairwiseCommand pairwise;
    gen.attach(app);
    ingest.attach(app);
    sketch.attach(app);
    compare.attach(app);
    grid.attach(app);
    pairwise.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IncompatibleSketches& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIncompatible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
