#include "simsketch/datasets.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "random.hpp"
#include "simsketch/errors.hpp"

namespace simsketch {

using detail::Rng;
using detail::uniform_below;
using detail::uniform_between;

namespace {

constexpr char kFirstPrintable = '!';  // 0x21
constexpr std::uint64_t kPrintableCount = 94;  // '!' .. '~'

std::string random_string(Rng& rng, std::size_t length) {
    std::string s(length, ' ');
    for (char& c : s) {
        c = static_cast<char>(kFirstPrintable + uniform_below(rng, kPrintableCount));
    }
    return s;
}

// Number of distinct strings of `length` printable characters, capped at 2^63.
std::uint64_t string_space(std::size_t length) {
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (space > (std::uint64_t{1} << 63) / kPrintableCount) {
            return std::uint64_t{1} << 63;
        }
        space *= kPrintableCount;
    }
    return space;
}

class FreshStrings {
public:
    FreshStrings(Rng& rng, std::size_t length) : rng_(rng), length_(length) {}

    std::string next() {
        for (;;) {
            std::string s = random_string(rng_, length_);
            if (used_.insert(s).second) {
                return s;
            }
        }
    }

private:
    Rng& rng_;
    std::size_t length_;
    std::unordered_set<std::string> used_;
};

std::string padded_index(const char* prefix, std::size_t i, std::size_t last) {
    const std::size_t width = std::max<std::size_t>(4, std::to_string(last).size());
    std::string digits = std::to_string(i);
    return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::string synthetic_pair_id(std::size_t i, std::size_t count) {
    return padded_index("sd-", i, count == 0 ? 0 : count - 1);
}

std::string synthetic_member_id(std::size_t i, std::size_t count) {
    return padded_index("A_", i, count == 0 ? 0 : count - 1);
}

constexpr const char* kBaseMemberId = "A_r";

}  // namespace

std::vector<MultisetPair> SyntheticCorpus::as_pairs() const {
    std::vector<MultisetPair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        out.push_back({synthetic_pair_id(p.index, pairs.size()), base, p.other});
    }
    return out;
}

SyntheticCorpus generate_synthetic(const SyntheticOptions& opts) {
    if (opts.pair_count == 0 || opts.target_unique == 0 || opts.string_length == 0) {
        throw std::invalid_argument("pair count, unique count and string length must be >= 1");
    }
    // T >= P/2 keeps consecutive achieved Dice values within 2/P of each other.
    const std::uint64_t min_mass = (opts.pair_count + 1) / 2;
    const std::uint64_t mean_count = std::max<std::uint64_t>(
        1, (min_mass + opts.target_unique - 1) / opts.target_unique);
    const std::uint64_t max_count = 2 * mean_count;

    const std::uint64_t worst_mass = std::max<std::uint64_t>(min_mass, opts.target_unique * max_count);
    const unsigned __int128 needed =
        opts.target_unique + static_cast<unsigned __int128>(opts.pair_count) * worst_mass;
    if (needed > string_space(opts.string_length) / 2) {
        throw GenerationError("string length " + std::to_string(opts.string_length) +
                              " cannot supply enough distinct random elements");
    }

    Rng rng(opts.seed);
    FreshStrings fresh(rng, opts.string_length);

    std::vector<std::pair<std::string, std::uint64_t>> base_entries;
    base_entries.reserve(opts.target_unique);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < opts.target_unique; ++i) {
        const std::uint64_t c = uniform_between(rng, 1, max_count);
        base_entries.emplace_back(fresh.next(), c);
        total += c;
    }
    while (total < min_mass) {
        ++base_entries[uniform_below(rng, base_entries.size())].second;
        ++total;
    }

    SyntheticCorpus corpus;
    for (const auto& [element, count] : base_entries) {
        corpus.base.insert(element, count);
    }

    const std::uint64_t steps = opts.pair_count - 1;
    corpus.pairs.reserve(opts.pair_count);
    std::vector<std::size_t> order(base_entries.size());
    for (std::size_t i = 0; i < opts.pair_count; ++i) {
        SyntheticPair pair;
        pair.index = i;
        pair.target_dice = steps == 0 ? 1.0 : static_cast<double>(i) / static_cast<double>(steps);
        const std::uint64_t shared =
            steps == 0 ? total
                       : static_cast<std::uint64_t>(
                             static_cast<unsigned __int128>(i) * total / steps);

        for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
        detail::shuffle(order, rng);
        std::uint64_t left = shared;
        for (std::size_t j : order) {
            if (left == 0) break;
            const std::uint64_t take = std::min(left, base_entries[j].second);
            pair.other.insert(base_entries[j].first, take);
            left -= take;
        }
        std::uint64_t padding = total - shared;
        while (padding > 0) {
            const std::uint64_t c = std::min(padding, uniform_between(rng, 1, max_count));
            pair.other.insert(fresh.next(), c);
            padding -= c;
        }
        pair.exact_dice = dice(corpus.base, pair.other);
        corpus.pairs.push_back(std::move(pair));
    }
    return corpus;
}

// ---------------------------------------------------------------------------

std::vector<MultisetPair> generate_listener_pairs(const ListenerPairOptions& opts) {
    if (opts.pair_count == 0 || opts.song_pool == 0 || opts.min_distinct == 0 ||
        opts.min_distinct > opts.max_distinct) {
        throw std::invalid_argument("invalid listener pair options");
    }
    if (2 * opts.max_distinct > opts.song_pool) {
        throw GenerationError("song pool too small for two disjoint profiles");
    }
    Rng rng(opts.seed);

    // Zipf-like popularity with exponent 0.8.
    std::vector<double> cumulative(opts.song_pool);
    double acc = 0.0;
    for (std::size_t j = 0; j < opts.song_pool; ++j) {
        acc += 1.0 / std::pow(static_cast<double>(j + 1), 0.8);
        cumulative[j] = acc;
    }
    auto draw_song = [&]() -> std::size_t {
        const double u = detail::uniform_unit(rng) * acc;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                     opts.song_pool - 1);
    };
    // Mostly single plays with a geometric tail.
    auto draw_plays = [&]() -> std::uint64_t {
        std::uint64_t c = 1;
        while (c < 500 && detail::uniform_unit(rng) < 0.45) ++c;
        return c;
    };
    auto song_name = [](std::size_t j) { return padded_index("SO", j, 999999); };

    std::vector<MultisetPair> out;
    out.reserve(opts.pair_count);
    for (std::size_t i = 0; i < opts.pair_count; ++i) {
        const std::size_t da = uniform_between(rng, opts.min_distinct, opts.max_distinct);
        const std::size_t db = uniform_between(rng, opts.min_distinct, opts.max_distinct);
        const double overlap = detail::uniform_unit(rng);
        const auto shared = static_cast<std::size_t>(
            std::llround(overlap * static_cast<double>(std::min(da, db))));

        std::set<std::size_t> a_songs;
        while (a_songs.size() < da) a_songs.insert(draw_song());
        std::vector<std::size_t> a_list(a_songs.begin(), a_songs.end());
        detail::shuffle(a_list, rng);

        std::set<std::size_t> b_songs(a_list.begin(), a_list.begin() + shared);
        while (b_songs.size() < db) {
            const std::size_t s = draw_song();
            if (!a_songs.contains(s)) b_songs.insert(s);
        }

        MultisetPair pair{padded_index("lp-", i, opts.pair_count - 1), {}, {}};
        for (std::size_t s : a_songs) pair.first.insert(song_name(s), draw_plays());
        for (std::size_t s : b_songs) pair.second.insert(song_name(s), draw_plays());
        out.push_back(std::move(pair));
    }
    return out;
}

// ---------------------------------------------------------------------------

IngestResult ingest_triplets(std::istream& in) {
    IngestResult result;
    std::unordered_map<std::string, std::size_t> seen;  // "user\tsong" -> record index
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
            throw ParseError(line_no, "expected 3 tab-separated fields");
        }
        std::string user = line.substr(0, tab1);
        std::string song = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string_view count_text = std::string_view(line).substr(tab2 + 1);
        if (user.empty() || song.empty()) {
            throw ParseError(line_no, "user and song must be non-empty");
        }
        std::uint64_t count = 0;
        const auto [ptr, ec] =
            std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
            throw ParseError(line_no, "play count '" + std::string(count_text) +
                                          "' is not a non-negative integer");
        }
        if (count == 0) {
            throw ParseError(line_no, "play count must be at least 1");
        }

        std::string key = user + '\t' + song;
        if (auto it = seen.find(key); it != seen.end()) {
            auto& rec = result.records[it->second];
            if (rec.play_count > UINT64_MAX - count) {
                throw ParseError(line_no, "summed play count overflows");
            }
            rec.play_count += count;
            result.warnings.push_back("line " + std::to_string(line_no) + ": duplicate (" +
                                      user + ", " + song + "); counts summed");
            continue;
        }
        seen.emplace(std::move(key), result.records.size());
        result.records.push_back({std::move(user), std::move(song), count});
    }
    return result;
}

IngestResult ingest_triplet_file(const std::filesystem::path& path) {
    // gzread passes uncompressed files through unchanged.
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) {
        throw Error("cannot open " + path.string());
    }
    std::string data;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) {
        data.append(buf, static_cast<std::size_t>(n));
    }
    const bool failed = n < 0;
    gzclose(f);
    if (failed) {
        throw Error("cannot read " + path.string());
    }
    std::istringstream in(std::move(data));
    return ingest_triplets(in);
}

ProfileMap build_user_profiles(const std::vector<ListeningRecord>& records,
                               std::size_t min_distinct) {
    ProfileMap all;
    for (const auto& r : records) {
        all[r.user].insert(r.song, r.play_count);
    }
    std::erase_if(all, [min_distinct](const auto& kv) {
        return kv.second.distinct_count() < min_distinct;
    });
    return all;
}

ProfileSummary summarize(const ProfileMap& profiles) {
    ProfileSummary s;
    std::unordered_set<std::string_view> songs;
    std::size_t distinct_total = 0;
    for (const auto& [_, m] : profiles) {
        ++s.users;
        s.total_plays += m.cardinality();
        distinct_total += m.distinct_count();
        for (const auto& [song, __] : m) songs.insert(song);
    }
    s.distinct_songs = songs.size();
    s.mean_distinct =
        s.users == 0 ? 0.0 : static_cast<double>(distinct_total) / static_cast<double>(s.users);
    return s;
}

void write_profiles_tsv(std::ostream& out, const ProfileMap& profiles) {
    for (const auto& [user, m] : profiles) {
        for (const auto& [song, count] : m) {
            out << user << '\t' << song << '\t' << count << '\n';
        }
    }
}

ProfileMap read_profiles_tsv(const std::filesystem::path& path) {
    return build_user_profiles(ingest_triplet_file(path).records, 0);
}

// ---------------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

ManifestEntry entry_for(std::string id, std::string first, const Multiset& a,
                        std::string second, const Multiset& b, std::optional<double> target) {
    ManifestEntry e;
    e.id = std::move(id);
    e.first = std::move(first);
    e.second = std::move(second);
    e.target_dice = target;
    e.exact_dice = dice(a, b);
    e.first_distinct = a.distinct_count();
    e.second_distinct = b.distinct_count();
    e.first_cardinality = a.cardinality();
    e.second_cardinality = b.cardinality();
    return e;
}

}  // namespace

CorpusManifest write_synthetic_corpus(const SyntheticCorpus& corpus,
                                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::size_t count = corpus.pairs.size();
    ProfileMap profiles;
    profiles.emplace(kBaseMemberId, corpus.base);
    CorpusManifest manifest{"profiles.tsv", {}};
    for (const auto& p : corpus.pairs) {
        const std::string member = synthetic_member_id(p.index, count);
        profiles.emplace(member, p.other);
        manifest.pairs.push_back(entry_for(synthetic_pair_id(p.index, count), kBaseMemberId,
                                           corpus.base, member, p.other, p.target_dice));
    }
    {
        std::ofstream out(dir / manifest.profiles_file, std::ios::binary);
        write_profiles_tsv(out, profiles);
        if (!out) throw Error("cannot write " + (dir / manifest.profiles_file).string());
    }
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    write_manifest(out, manifest);
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    return manifest;
}

CorpusManifest make_profile_manifest(const ProfileMap& profiles,
                                     const std::vector<std::pair<std::string, std::string>>& pairs,
                                     std::string profiles_file) {
    CorpusManifest manifest{std::move(profiles_file), {}};
    const std::size_t count = pairs.size();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& [a, b] = pairs[i];
        manifest.pairs.push_back(entry_for(padded_index("rd-", i, count == 0 ? 0 : count - 1),
                                           a, profiles.at(a), b, profiles.at(b), std::nullopt));
    }
    return manifest;
}

std::vector<std::pair<std::string, std::string>> sample_user_pairs(const ProfileMap& profiles,
                                                                   std::size_t count,
                                                                   std::uint64_t seed) {
    std::vector<std::string> users;
    for (const auto& [u, _] : profiles) users.push_back(u);
    const std::uint64_t n = users.size();
    const std::uint64_t all = n < 2 ? 0 : n * (n - 1) / 2;
    std::vector<std::pair<std::string, std::string>> out;
    if (count >= all) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(users[i], users[j]);
        return out;
    }
    Rng rng(seed);
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    while (out.size() < count) {
        std::size_t i = uniform_below(rng, n);
        std::size_t j = uniform_below(rng, n);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        if (chosen.emplace(i, j).second) out.emplace_back(users[i], users[j]);
    }
    return out;
}

void write_manifest(std::ostream& out, const CorpusManifest& manifest) {
    ojson doc;
    doc["format"] = "simsketch-corpus";
    doc["version"] = 1;
    doc["profiles"] = manifest.profiles_file;
    ojson pairs = ojson::array();
    for (const auto& e : manifest.pairs) {
        ojson p;
        p["id"] = e.id;
        p["first"] = e.first;
        p["second"] = e.second;
        p["target_dice"] = e.target_dice ? ojson(*e.target_dice) : ojson(nullptr);
        p["exact_dice"] = e.exact_dice;
        p["first_distinct"] = e.first_distinct;
        p["second_distinct"] = e.second_distinct;
        p["first_cardinality"] = e.first_cardinality;
        p["second_cardinality"] = e.second_cardinality;
        pairs.push_back(std::move(p));
    }
    doc["pairs"] = std::move(pairs);
    out << doc.dump(2) << '\n';
}

CorpusManifest read_manifest(std::istream& in) {
    ojson doc;
    try {
        doc = ojson::parse(in);
        if (doc.at("format") != "simsketch-corpus") {
            throw Error("not a simsketch corpus manifest");
        }
        if (doc.at("version") != 1) {
            throw Error("unsupported manifest version");
        }
        CorpusManifest m;
        m.profiles_file = doc.at("profiles").get<std::string>();
        for (const auto& p : doc.at("pairs")) {
            ManifestEntry e;
            e.id = p.at("id").get<std::string>();
            e.first = p.at("first").get<std::string>();
            e.second = p.at("second").get<std::string>();
            if (!p.at("target_dice").is_null()) e.target_dice = p.at("target_dice").get<double>();
            e.exact_dice = p.at("exact_dice").get<double>();
            e.first_distinct = p.at("first_distinct").get<std::size_t>();
            e.second_distinct = p.at("second_distinct").get<std::size_t>();
            e.first_cardinality = p.at("first_cardinality").get<std::uint64_t>();
            e.second_cardinality = p.at("second_cardinality").get<std::uint64_t>();
            m.pairs.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed manifest: ") + e.what());
    }
}

std::vector<MultisetPair> load_corpus(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw Error("cannot open " + manifest_path.string());
    const CorpusManifest manifest = read_manifest(in);
    const ProfileMap profiles =
        read_profiles_tsv(manifest_path.parent_path() / manifest.profiles_file);
    auto lookup = [&](const std::string& id) -> const Multiset& {
        auto it = profiles.find(id);
        if (it == profiles.end()) {
            throw Error("manifest references unknown profile '" + id + "'");
        }
        return it->second;
    };
    std::vector<MultisetPair> out;
    out.reserve(manifest.pairs.size());
    for (const auto& e : manifest.pairs) {
        out.push_back({e.id, lookup(e.first), lookup(e.second)});
    }
    return out;
}

}  // namespace simsketch
