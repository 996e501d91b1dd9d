// Drives the simsketch executable end to end and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kFixture = fs::path(SIMSKETCH_TEST_DATA) / "triplets_50users.tsv";

struct Invocation {
    int code = -1;
    std::string out;  // stdout
    std::string err;  // stderr
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("simsketch-cli-" + std::string(::testing::UnitTest::GetInstance()
                                                   ->current_test_info()
                                                   ->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Invocation run(const std::string& args) const {
        const auto out = dir_ / "stdout.txt";
        const auto err = dir_ / "stderr.txt";
        const std::string cmd = std::string("'") + SIMSKETCH_CLI + "' " + args + " >'" +
                                out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        Invocation r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // A two-user profile file and one of its users' profiles alone.
    void write_profiles() const {
        std::ofstream(path("two.tsv")) << "a\ts1\t3\na\ts2\t1\nb\ts1\t1\nb\ts3\t2\n";
    }

    fs::path dir_;
};

TEST_F(Cli, GenIsDeterministic) {
    ASSERT_EQ(run("gen --pairs 21 --seed 4 -o " + path("one")).code, 0);
    ASSERT_EQ(run("gen --pairs 21 --seed 4 -o " + path("two")).code, 0);
    EXPECT_EQ(slurp(path("one/manifest.json")), slurp(path("two/manifest.json")));
    EXPECT_EQ(slurp(path("one/profiles.tsv")), slurp(path("two/profiles.tsv")));
    ASSERT_EQ(run("gen --pairs 21 --seed 5 -o " + path("three")).code, 0);
    EXPECT_NE(slurp(path("one/profiles.tsv")), slurp(path("three/profiles.tsv")));
}

TEST_F(Cli, GenSinglePair) {
    ASSERT_EQ(run("gen --pairs 1 -o " + path("c")).code, 0);
    const auto manifest = slurp(path("c/manifest.json"));
    EXPECT_NE(manifest.find("\"sd-0000\""), std::string::npos);
    EXPECT_EQ(manifest.find("\"sd-0001\""), std::string::npos);
    EXPECT_EQ(run("gen --pairs 0 -o " + path("d")).code, 64);
    EXPECT_EQ(run("gen").code, 64);
}

TEST_F(Cli, GenFullCorpusAndCompareMidPair) {
    ASSERT_EQ(run("gen --pairs 1001 --unique 67 --strlen 10 --seed 7 -o " + path("c")).code, 0);
    const auto manifest = slurp(path("c/manifest.json"));
    EXPECT_NE(manifest.find("\"sd-1000\""), std::string::npos);
    EXPECT_EQ(manifest.find("\"sd-1001\""), std::string::npos);

    // Companion 500 targets Dice 0.5 against the reference.
    const auto r = run("compare " + path("c/profiles.tsv") + " " + path("c/profiles.tsv") +
                       " --user-a A_r --user-b A_0500 --truth -n 400 -k 1");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::map<std::string, double> values;
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find('=');
        if (line.rfind("metric", 0) != 0) values[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
    EXPECT_NEAR(values.at("truth"), 0.5, 0.01);
    EXPECT_GE(values.at("estimate"), values.at("truth"));
    EXPECT_GE(values.at("error"), 0.0);
}

TEST_F(Cli, IngestSummary) {
    const auto r = run("ingest " + kFixture.string() + " --min-distinct 50");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"records\": 2475"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"users\": 25"), std::string::npos) << r.out;
    const auto all = run("ingest " + kFixture.string() + " --min-distinct 0");
    EXPECT_NE(all.out.find("\"users\": 50"), std::string::npos) << all.out;
}

TEST_F(Cli, IngestRejectsMalformedInput) {
    std::ofstream(path("bad.tsv")) << "u\ts\t1\nu\ts2\tzero\n";
    const auto r = run("ingest " + path("bad.tsv"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    EXPECT_EQ(run("ingest " + path("missing.tsv")).code, 1);
    EXPECT_EQ(run("ingest " + kFixture.string() + " --manifest " + path("m.json")).code, 64);
}

TEST_F(Cli, IngestWritesUsableManifest) {
    ASSERT_EQ(run("ingest " + kFixture.string() + " --profiles " + path("p.tsv") +
                  " --manifest " + path("m.json") + " --pairs 30 --summary " + path("s.json"))
                  .code,
              0);
    const auto r = run("pairwise --manifest " + path("m.json") + " -o " + path("cmp.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(path("cmp.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 31);
    EXPECT_NE(csv.find("rd-0029"), std::string::npos);
}

TEST_F(Cli, SketchPrintsSize) {
    write_profiles();
    const auto r = run("sketch " + path("two.tsv") + " --user a -n 128 -k 1 -o " + path("a.sk"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "539\n");
    EXPECT_EQ(fs::file_size(path("a.sk")), 539U);
    EXPECT_EQ(run("sketch " + path("two.tsv") + " --user a -k 0 -o " + path("b.sk")).code, 64);
    EXPECT_EQ(run("sketch " + path("two.tsv") + " --user zz -o " + path("c.sk")).code, 1);
}

TEST_F(Cli, CompareSelfAndTruth) {
    write_profiles();
    ASSERT_EQ(run("sketch " + path("two.tsv") + " --user a -o " + path("a.sk")).code, 0);
    const auto self = run("compare " + path("a.sk") + " " + path("a.sk"));
    ASSERT_EQ(self.code, 0) << self.err;
    EXPECT_EQ(self.out, "metric=dice\nestimate=1\n");

    const auto truth = run("compare " + path("two.tsv") + " " + path("two.tsv") +
                           " --user-a a --user-b b --truth -n 65536");
    ASSERT_EQ(truth.code, 0) << truth.err;
    // Exact Dice: 2 * min(3, 1) / (4 + 3).
    EXPECT_NE(truth.out.find("truth=0.2857142857142857\n"), std::string::npos) << truth.out;

    const auto mixed = run("compare " + path("a.sk") + " " + path("two.tsv") + " --user-b a");
    EXPECT_EQ(mixed.out, "metric=dice\nestimate=1\n") << mixed.err;
}

TEST_F(Cli, CompareIncompatibleEnvelopes) {
    write_profiles();
    ASSERT_EQ(run("sketch " + path("two.tsv") + " --user a --seed 1 -o " + path("a.sk")).code, 0);
    ASSERT_EQ(run("sketch " + path("two.tsv") + " --user b --seed 2 -n 64 -o " + path("b.sk")).code,
              0);
    const auto r = run("compare " + path("a.sk") + " " + path("b.sk"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("width seed"), std::string::npos) << r.err;
}

TEST_F(Cli, GridAndPairwise) {
    ASSERT_EQ(run("gen --pairs 41 -o " + path("c")).code, 0);
    const auto g = run("grid --manifest " + path("c/manifest.json") +
                       " --kind cms --widths 64,128 --depths 1,2,4 --threads 3 -o " +
                       path("grid.csv"));
    ASSERT_EQ(g.code, 0) << g.err;
    const auto csv = slurp(path("grid.csv"));
    EXPECT_EQ(csv.rfind("dim,depth,rmse\n64,1,", 0), 0U) << csv;
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);

    const auto p = run("pairwise --manifest " + path("c/manifest.json") + " -o " + path("p.csv") +
                       " --threshold-out " + path("t.csv"));
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(slurp(path("p.csv")).rfind("pair_id,truth,estimate,error\n", 0), 0U);
    EXPECT_EQ(slurp(path("t.csv")).rfind("threshold,tp,fp,tn,fn,max_overshoot\n0.6,", 0), 0U);

    EXPECT_EQ(run("grid --manifest " + path("c/manifest.json") + " --kind bf -o " + path("x.csv"))
                  .code,
              64);
}

}  // namespace
