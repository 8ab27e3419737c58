#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef SPA_CLI_PATH
#define SPA_CLI_PATH "spa"
#endif

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "spa_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

CliRun run_cli(const TempDir& dir, const std::string& args) {
    const std::string out_path = dir.file("_stdout");
    const std::string err_path = dir.file("_stderr");
    const std::string command = std::string(SPA_CLI_PATH) + " " + args + " > " + out_path +
                                " 2> " + err_path;
    const int status = std::system(command.c_str());
    CliRun result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes the dataset and reports its shape") {
    TempDir dir;
    auto run = run_cli(dir, "synth --family disjoint-curves --n 100 --sigma 0 --seed 7 -o " +
                                dir.file("d.csv"));
    CHECK(run.exit_code == 0);
    CHECK(run.out == "n=200 D=2 L=2\n");
    CHECK(count_lines(slurp(dir.file("d.csv"))) == 200);
}

TEST_CASE("synth with an unknown family exits 2") {
    TempDir dir;
    auto run = run_cli(dir, "synth --family moebius --n 10 -o " + dir.file("d.csv"));
    CHECK(run.exit_code == 2);
    CHECK(run.err.find("family") != std::string::npos);
}

TEST_CASE("synth is byte-identical across runs with the same flags") {
    TempDir dir;
    const std::string flags = "synth --family funky-curves --n 40 --sigma 0.05 --seed 3 -o ";
    CHECK(run_cli(dir, flags + dir.file("a.csv")).exit_code == 0);
    CHECK(run_cli(dir, flags + dir.file("b.csv")).exit_code == 0);
    const auto a = slurp(dir.file("a.csv"));
    CHECK(!a.empty());
    CHECK(a == slurp(dir.file("b.csv")));
}

TEST_CASE("split then eval prints a four-decimal accuracy and writes a report") {
    TempDir dir;
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 80 --sigma 0.02 --seed 1 -o " +
                             dir.file("d.csv")).exit_code == 0);
    auto split = run_cli(dir, "split --input " + dir.file("d.csv") +
                                  " --fraction 0.5 --seed 2 --train-out " +
                                  dir.file("tr.csv") + " --test-out " + dir.file("te.csv"));
    CHECK(split.exit_code == 0);
    CHECK(split.out == "train=80 test=80\n");

    const auto train_before = slurp(dir.file("tr.csv"));
    auto eval = run_cli(dir, "eval --train " + dir.file("tr.csv") + " --test " +
                                 dir.file("te.csv") + " --p 1 -o " + dir.file("r.json"));
    CHECK(eval.exit_code == 0);
    REQUIRE(eval.out.rfind("accuracy ", 0) == 0);
    CHECK(eval.out.size() == std::string("accuracy 0.1234\n").size());
    const auto report = slurp(dir.file("r.json"));
    CHECK(report.find("\"schema_version\"") != std::string::npos);
    CHECK(report.find("\"accuracy\"") != std::string::npos);
    // inputs are never mutated
    CHECK(slurp(dir.file("tr.csv")) == train_before);

    auto eval_csv = run_cli(dir, "eval --train " + dir.file("tr.csv") + " --test " +
                                     dir.file("te.csv") + " --p 1 --format csv -o " +
                                     dir.file("r.csv"));
    CHECK(eval_csv.exit_code == 0);
    CHECK(slurp(dir.file("r.csv")).rfind("key,value\n", 0) == 0);
}

TEST_CASE("eval with mismatched dimensions exits 4") {
    TempDir dir;
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 30 --seed 1 -o " +
                             dir.file("d2.csv")).exit_code == 0);
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 30 --seed 1 --dim 3 -o " +
                             dir.file("d3.csv")).exit_code == 0);
    auto run = run_cli(dir, "eval --train " + dir.file("d2.csv") + " --test " +
                                dir.file("d3.csv") + " --p 1");
    CHECK(run.exit_code == 4);
}

TEST_CASE("missing input file exits 3") {
    TempDir dir;
    auto run = run_cli(dir, "eval --train " + dir.file("absent.csv") + " --test " +
                                dir.file("absent.csv") + " --p 1");
    CHECK(run.exit_code == 3);
}

TEST_CASE("tuned p is reported on stdout and in the JSON summary") {
    TempDir dir;
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 60 --sigma 0.01 --dim 3 "
                         "--seed 4 -o " + dir.file("d.csv")).exit_code == 0);
    auto split = run_cli(dir, "split --input " + dir.file("d.csv") +
                                  " --fraction 0.5 --seed 5 --train-out " +
                                  dir.file("tr.csv") + " --test-out " + dir.file("te.csv"));
    REQUIRE(split.exit_code == 0);
    auto eval = run_cli(dir, "eval --train " + dir.file("tr.csv") + " --test " +
                                 dir.file("te.csv") + " --p auto --p-grid 1,2 -o " +
                                 dir.file("r.json"));
    CHECK(eval.exit_code == 0);
    CHECK(slurp(dir.file("r.json")).find("\"p\": 1") != std::string::npos);

    auto tune = run_cli(dir, "tune --train " + dir.file("tr.csv") + " --p-grid 1,2 -o " +
                                 dir.file("t.json"));
    CHECK(tune.exit_code == 0);
    CHECK(tune.out == "p=1\n");
    CHECK(slurp(dir.file("t.json")).find("\"chosen_p\": 1") != std::string::npos);
}

TEST_CASE("learning curve writes one CSV row per fraction") {
    TempDir dir;
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 60 --sigma 0.02 --seed 6 -o " +
                             dir.file("d.csv")).exit_code == 0);
    auto run = run_cli(dir, "learning-curve --data " + dir.file("d.csv") +
                                " --fractions 0.2,0.5,0.8 --repeats 2 --seed 1 --p 1 -o " +
                                dir.file("curve.csv"));
    CHECK(run.exit_code == 0);
    const auto curve = slurp(dir.file("curve.csv"));
    CHECK(count_lines(curve) == 4); // header + 3 rows
    CHECK(curve.rfind("fraction,n_train,mean_accuracy,std_accuracy\n", 0) == 0);
}

TEST_CASE("bound prints the closed form and flags the trivial regime") {
    TempDir dir;
    auto run = run_cli(dir, "bound --delta 1 --sigma 0.1 --dim 2");
    CHECK(run.exit_code == 0);
    CHECK(run.out.rfind("bound 0.000126626169982", 0) == 0);
    CHECK(run.out.find("trivial=0") != std::string::npos);

    // delta^2 = 4 D sigma^2 -> trivial flag
    auto trivial = run_cli(dir, "bound --delta 2 --sigma 0.5 --dim 4");
    CHECK(trivial.exit_code == 0);
    CHECK(trivial.out == "bound 1 trivial=1\n");

    auto bad = run_cli(dir, "bound --delta -1 --sigma 0.5 --dim 4");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("fit and predict round-trip through the manifest") {
    TempDir dir;
    REQUIRE(run_cli(dir, "synth --family disjoint-curves --n 50 --sigma 0.01 --seed 8 -o " +
                             dir.file("d.csv")).exit_code == 0);
    auto fit = run_cli(dir, "fit --train " + dir.file("d.csv") + " --p 1 --model-out " +
                                dir.file("model.json"));
    CHECK(fit.exit_code == 0);
    CHECK(fit.out.rfind("k=", 0) == 0);

    // queries: two points near each curve's center line
    std::ofstream q(dir.file("q.csv"));
    q << "0.0,1.5\n0.0,-1.5\n";
    q.close();
    auto predict = run_cli(dir, "predict --model " + dir.file("model.json") +
                                    " --queries " + dir.file("q.csv") + " -o " +
                                    dir.file("pred.csv"));
    CHECK(predict.exit_code == 0);
    const auto pred = slurp(dir.file("pred.csv"));
    CHECK(pred.rfind("label,distance_1,distance_2\n", 0) == 0);
    CHECK(pred.find("\n1,") != std::string::npos);
    CHECK(pred.find("\n2,") != std::string::npos);

    // tampering with the referenced CSV must fail the checksum on load
    std::ofstream tamper(dir.file("model.json.csv"), std::ios::app);
    tamper << "1,0,0\n";
    tamper.close();
    auto broken = run_cli(dir, "predict --model " + dir.file("model.json") +
                                   " --queries " + dir.file("q.csv") + " -o " +
                                   dir.file("pred2.csv"));
    CHECK(broken.exit_code == 4);
}

TEST_CASE("no subcommand exits 2") {
    TempDir dir;
    CHECK(run_cli(dir, "").exit_code == 2);
}

TEST_CASE("unwritable output path exits 3") {
    TempDir dir;
    auto run = run_cli(dir, "synth --family disjoint-curves --n 10 -o /nonexistent_dir/x.csv");
    CHECK(run.exit_code == 3);
}

} // TEST_SUITE
