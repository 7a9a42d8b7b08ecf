#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fastpoints/detector.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/experiment.hpp"
#include "fastpoints/parallel.hpp"
#include "fastpoints/path_sampler.hpp"

using namespace fastpoints;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct SeedEnvGuard {
    SeedEnvGuard() {
        const char* old = std::getenv("FASTPOINTS_SEED");
        if (old != nullptr) {
            saved = old;
            had = true;
        }
        unsetenv("FASTPOINTS_SEED");
    }
    ~SeedEnvGuard() {
        if (had)
            setenv("FASTPOINTS_SEED", saved.c_str(), 1);
        else
            unsetenv("FASTPOINTS_SEED");
    }
    std::string saved;
    bool had = false;
};

}  // namespace

TEST_CASE("parse_config applies defaults for a bare preset") {
    SeedEnvGuard guard;
    CHECK_THROWS_AS(parse_config({}), usage_error);

    const ExperimentConfig cfg = parse_config({{"preset", "orey-taylor"}});
    CHECK(cfg.preset == "orey-taylor");
    CHECK(cfg.master_seed == 20260822ull);
    CHECK(cfg.n_paths == 200);
    CHECK(cfg.level_min == 8);
    CHECK(cfg.level_max == 12);
    CHECK(cfg.a == 0.5);
    CHECK(cfg.epsilon == 0.0);
    CHECK(cfg.drift.is_zero());
    CHECK(!cfg.hurst.has_value());
    CHECK(cfg.output_path.empty());
}

TEST_CASE("seed environment variable feeds the default seed") {
    SeedEnvGuard guard;
    setenv("FASTPOINTS_SEED", "777", 1);
    const ExperimentConfig env_only = parse_config({{"preset", "dims"}});
    CHECK(env_only.master_seed == 777ull);
    // Explicit keys still win over the environment.
    const ExperimentConfig both =
        parse_config({{"preset", "dims"}, {"seed", "42"}});
    CHECK(both.master_seed == 42ull);
}

TEST_CASE("later config entries win") {
    ConfigText text{{"preset", "dims"}, {"a", "0.3"}};
    apply_override(text, "a", "0.7");
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.a == 0.7);
}

TEST_CASE("unknown keys, presets, and bad values are usage errors") {
    CHECK_THROWS_AS(parse_config({{"preset", "dims"}, {"zzz", "1"}}),
                    usage_error);
    CHECK_THROWS_AS(parse_config({{"preset", "nope"}}), usage_error);
    CHECK_THROWS_AS(parse_config({{"preset", "dims"}, {"paths", "many"}}),
                    usage_error);
    CHECK_THROWS_AS(parse_config({{"preset", "dims"}, {"levels", "12:8"}}),
                    usage_error);
    CHECK_THROWS_AS(parse_config({{"preset", "fbm"}, {"levels", "8:20"}}),
                    usage_error);
}

TEST_CASE("presets carry drift defaults that explicit keys override") {
    const ExperimentConfig dims = parse_config({{"preset", "dims"}});
    const DriftSpec::Cantor* cantor = dims.drift.as_cantor();
    REQUIRE(cantor != nullptr);
    CHECK(cantor->gamma == doctest::Approx(1.0 / 9.0).epsilon(1e-15));

    const ExperimentConfig loud = parse_config({{"preset", "loud-drift"}});
    CHECK(loud.drift.as_loud() != nullptr);

    const ExperimentConfig sandwich =
        parse_config({{"preset", "holder-sandwich"}});
    REQUIRE(sandwich.drift.as_cantor() != nullptr);
    CHECK(sandwich.drift.as_cantor()->gamma == 0.25);

    const ExperimentConfig custom =
        parse_config({{"preset", "dims"}, {"drift", "cantor:gamma=0.2,depth=16"}});
    REQUIRE(custom.drift.as_cantor() != nullptr);
    CHECK(custom.drift.as_cantor()->gamma == doctest::Approx(0.2));
}

TEST_CASE("validate_config collects every violation") {
    const ValidationReport bad = validate_config(
        {{"preset", "fbm"}, {"levels", "2:20"}, {"a", "-1"}});
    CHECK(!bad.ok);
    CHECK(bad.violations.size() >= 2);

    const ValidationReport good = validate_config({{"preset", "dims"}});
    CHECK(good.ok);
    CHECK(good.violations.empty());
    CHECK(!good.notes.empty());
}

TEST_CASE("rows_to_csv fixed schema and formatting") {
    ResultRow row;
    row.preset = "dims";
    row.level = 10;
    row.stat = "thing";
    row.value = 0.123456789012345;
    row.stderr_value = 0.25;
    row.n_paths = 5;
    row.seed = 99;
    std::vector<ResultRow> rows{row};
    std::string csv = rows_to_csv(rows);
    std::istringstream lines(csv);
    std::string header, body;
    std::getline(lines, header);
    std::getline(lines, body);
    CHECK(header == "preset,level,stat,value,stderr,oracle,n_paths,seed");
    CHECK(body == "dims,10,thing,0.123456789012,0.25,,5,99");

    rows[0].oracle = 0.75;
    csv = rows_to_csv(rows);
    CHECK(csv.find(",0.75,5,99") != std::string::npos);

    rows[0].value = std::nan("");
    CHECK_THROWS_AS(rows_to_csv(rows), numeric_error);
}

TEST_CASE("dims preset emits the closed-form dimensions") {
    SeedEnvGuard guard;
    ExperimentConfig cfg = parse_config({{"preset", "dims"}});
    cfg.output_path = "exp_dims_test.csv";
    const std::vector<ResultRow> rows = run(cfg);
    bool saw_fast = false, saw_cantor = false;
    for (const ResultRow& row : rows) {
        if (row.stat == "dim_fast") {
            saw_fast = true;
            CHECK(row.value == doctest::Approx(0.75).epsilon(1e-12));
        }
        if (row.stat == "dim_cantor") {
            saw_cantor = true;
            CHECK(row.value ==
                  doctest::Approx(0.3154648767857287).epsilon(1e-12));
        }
    }
    CHECK(saw_fast);
    CHECK(saw_cantor);
    CHECK(slurp("exp_dims_test.csv") == rows_to_csv(rows));
    std::remove("exp_dims_test.csv");
}

TEST_CASE("runs are byte-identical across reruns and worker counts") {
    SeedEnvGuard guard;
    ExperimentConfig cfg = parse_config(
        {{"preset", "orey-taylor"}, {"paths", "60"}, {"levels", "8:10"}});

    cfg.output_path = "exp_w1_test.csv";
    set_worker_count(1);
    run(cfg);
    cfg.output_path = "exp_w7_test.csv";
    set_worker_count(7);
    run(cfg);
    set_worker_count(0);
    cfg.output_path = "exp_again_test.csv";
    run(cfg);

    const std::string w1 = slurp("exp_w1_test.csv");
    CHECK(!w1.empty());
    CHECK(w1 == slurp("exp_w7_test.csv"));
    CHECK(w1 == slurp("exp_again_test.csv"));
    std::remove("exp_w1_test.csv");
    std::remove("exp_w7_test.csv");
    std::remove("exp_again_test.csv");
}

TEST_CASE("flag serialization round-trips every kind") {
    const SamplePath path = sample_bm(816001, 10);
    const IntervalFlags l = l_flags(path, 8, 0.5, 0.1);
    const IntervalFlags sup = sup_flags(path, 6, 0.7);
    const IntervalFlags zero = zero_near_flags(path, 8, 1.5);
    const IntervalFlags inter = intersect_flags(l, zero);
    for (const IntervalFlags& original : {l, sup, zero, inter}) {
        const IntervalFlags back = parse_rle_flags(flags_to_rle(original));
        CHECK(back.level == original.level);
        CHECK(back.flag_kind == original.flag_kind);
        CHECK(back.params.a == original.params.a);
        CHECK(back.params.epsilon == original.params.epsilon);
        CHECK(back.flags == original.flags);
    }
}

TEST_CASE("malformed flag text is a usage error") {
    CHECK_THROWS_AS(parse_rle_flags("level=8 kind=FAST_L runs=0*300"),
                    usage_error);
    CHECK_THROWS_AS(parse_rle_flags("level=8 kind=FAST_L runs=0*100"),
                    usage_error);
    CHECK_THROWS_AS(parse_rle_flags("level=8 kind=WHAT runs=0*256"),
                    usage_error);
    CHECK_THROWS_AS(parse_rle_flags("level=8 kind=FAST_L runs=2*256"),
                    usage_error);
    CHECK_THROWS_AS(parse_rle_flags("level=8 kind FAST_L"), usage_error);
}

TEST_CASE("load_config_file reads key = value lines") {
    const char* path = "exp_config_test.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n\npreset = orey-taylor\n  a = 0.6  \n";
    }
    const ConfigText text = load_config_file(path);
    REQUIRE(text.size() == 2);
    CHECK(text[0].first == "preset");
    CHECK(text[0].second == "orey-taylor");
    CHECK(text[1].first == "a");
    CHECK(text[1].second == "0.6");
    {
        std::ofstream out(path);
        out << "no equals sign here\n";
    }
    CHECK_THROWS_AS(load_config_file(path), usage_error);
    CHECK_THROWS_AS(load_config_file("missing_config_test.cfg"), usage_error);
    std::remove(path);
}

TEST_CASE("parallel_for propagates worker exceptions") {
    set_worker_count(4);
    CHECK_THROWS_AS(parallel_for(100,
                                 [](std::size_t i) {
                                     if (i == 37)
                                         throw config_error("boom");
                                 }),
                    config_error);
    set_worker_count(0);
}
