#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs the installed binary through the shell, capturing both streams.
Result run_cli(const std::string& args) {
    static int counter = 0;
    const auto base = std::filesystem::temp_directory_path() /
                      ("halfourier_it_" + std::to_string(++counter));
    const std::string out_path = base.string() + ".out";
    const std::string err_path = base.string() + ".err";
    const std::string cmd = std::string(HALFOURIER_BIN) + " " + args + " >" +
                            out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string golden(const std::string& name) {
    return slurp(std::string(HALFOURIER_GOLDEN_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("every subcommand is byte-stable across repeated runs") {
    const std::vector<std::string> commands{
        "transform --kernel 'singexp(p=0.5,delta=1)' --lambda-min 1 "
        "--lambda-max 1000 --points 5",
        "asymptote --kernel 'exp(delta=1)' --lambda-min 100 --lambda-max "
        "10000 --points 5",
        "identify --kernel 'singexp(p=0.25,delta=1)'",
        "lemma-check --which lemma1 --kernel 'exp(delta=1)' --lambda 5 "
        "--alpha 0.3",
        "rate --p 0.25",
        "proxy --kernel 'singexp(p=0.5,delta=1)' --lambda-min 10 "
        "--lambda-max 1000 --points 4",
        "simulate --kernel 'exp(delta=1)' --alpha 1 --tmax 5 --dt 0.25",
    };
    for (const auto& cmd : commands) {
        INFO(cmd);
        const auto a = run_cli(cmd);
        const auto b = run_cli(cmd);
        CHECK(a.status == 0);
        CHECK(b.status == 0);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("transform at lambda = 10 reproduces the analytic row") {
    const auto r =
        run_cli("transform --kernel 'exp(delta=1)' --lambda 10 --tol 1e-10");
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    CHECK(header == "lambda,re,im,err_est");
    REQUIRE(std::getline(in, row));
    std::istringstream cells(row);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(cells, cell, ','))
        vals.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(vals.size() == 4);
    CHECK(vals[0] == 10.0);
    CHECK(vals[1] == doctest::Approx(1.0 / 101.0).epsilon(1e-8));
    CHECK(vals[2] == doctest::Approx(-10.0 / 101.0).epsilon(1e-8));
}

TEST_CASE("golden outputs are reproduced byte for byte") {
    const auto transform =
        run_cli("transform --kernel 'exp(delta=1)' --lambda 10 --tol 1e-10");
    CHECK(transform.status == 0);
    CHECK(transform.out == golden("transform_exp_lambda10.csv"));

    const auto rate = run_cli("rate --p 0.5");
    CHECK(rate.status == 0);
    CHECK(rate.out == golden("rate_p05.txt"));

    const auto lemma =
        run_cli("lemma-check --which lemma2 --p 0.5 --lambda 1 --beta 1");
    CHECK(lemma.status == 0);
    CHECK(lemma.out == golden("lemma2_p05_l1_b1.txt"));

    // and the checked residual is genuinely small, not merely stable
    const double residual =
        std::strtod(lemma.out.c_str() + std::string("residual=").size(),
                    nullptr);
    CHECK(residual < 1e-9);
}

TEST_CASE("usage problems surface as exit status 2 with no CSV") {
    const auto r = run_cli("transform --kernel 'exp(delta=1)'");
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());

    CHECK(run_cli("no-such-subcommand").status == 2);
    CHECK(run_cli("transform --kernel 'garbage(' --lambda 1").status == 2);
}
