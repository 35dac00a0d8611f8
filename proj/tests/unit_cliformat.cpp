#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "halfourier/cli_app.hpp"
#include "halfourier/numfmt.hpp"

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = halfourier::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("rate emits the exact forecast line") {
    const auto r = run({"rate", "--p", "0.5"});
    CHECK(r.status == 0);
    CHECK(r.out ==
          "resolvent_exponent=1.5 decay_exponent=0.6666666666666666 "
          "optimal_p0=false\n");
    const auto r0 = run({"rate", "--p", "0"});
    CHECK(r0.out ==
          "resolvent_exponent=2 decay_exponent=0.5 optimal_p0=true\n");
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::vector<std::string> args{
        "transform", "--kernel", "singexp(p=0.5,delta=1)", "--lambda-min",
        "1",         "--lambda-max", "100", "--points", "7"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
}

TEST_CASE("transform CSV carries its header and parses back exactly") {
    const auto r = run({"transform", "--kernel", "exp(delta=1)",
                        "--lambda-min", "1", "--lambda-max", "10", "--points",
                        "3"});
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "lambda,re,im,err_est");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            // shortest-round-trip printing: strtod + reformat is the identity
            const double v = std::strtod(cell.c_str(), nullptr);
            CHECK(halfourier::format_double(v) == cell);
        }
    }
    CHECK(rows == 3);
}

TEST_CASE("asymptote writes the report CSV and a slope summary on stderr") {
    const auto r = run({"asymptote", "--kernel", "exp(delta=1)",
                        "--lambda-min", "100", "--lambda-max", "10000",
                        "--points", "4"});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("lambda,scaled_re,scaled_im,deviation\n", 0) == 0);
    CHECK(r.err.find("fitted_slope=") != std::string::npos);
}

TEST_CASE("simulate emits one row per step plus the header") {
    const auto r = run({"simulate", "--kernel", "exp(delta=1)", "--alpha", "1",
                        "--tmax", "2", "--dt", "0.25"});
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,u,v,energy");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 9);
}

TEST_CASE("identify and proxy and lemma-check produce key=value lines") {
    const auto id = run({"identify", "--kernel", "singexp(p=0.5,delta=1)"});
    CHECK(id.status == 0);
    CHECK(id.out.rfind("p=", 0) == 0);
    CHECK(id.out.find(" ell=") != std::string::npos);
    CHECK(id.out.find(" residual=") != std::string::npos);

    const auto lc = run({"lemma-check", "--which", "lemma2", "--p", "0.5",
                         "--lambda", "1", "--beta", "1"});
    CHECK(lc.status == 0);
    CHECK(lc.out.rfind("residual=", 0) == 0);

    const auto px = run({"proxy", "--kernel", "exp(delta=1)", "--lambda-min",
                         "10", "--lambda-max", "1000", "--points", "3"});
    CHECK(px.status == 0);
    CHECK(px.out.rfind("lambda,g\n", 0) == 0);
    CHECK(px.err.find("fitted_exponent=") != std::string::npos);
    CHECK(px.err.find("predicted_prefactor=") != std::string::npos);
}

TEST_CASE("decompose prints the three pieces and their sum") {
    const auto r = run({"lemma-check", "--which", "decompose", "--kernel",
                        "singexp(p=0.5,delta=1)", "--lambda", "100", "--beta",
                        "1"});
    CHECK(r.status == 0);
    for (const char* key : {"i1_re=", "i1_im=", "i2_re=", "i2_im=", "i3_re=",
                            "i3_im=", "sum_re=", "sum_im="})
        CHECK(r.out.find(key) != std::string::npos);
}

TEST_CASE("--out redirects the payload to a file and keeps stdout clean") {
    const auto path = (std::filesystem::temp_directory_path() /
                       "halfourier_cli_out_test.csv")
                          .string();
    const auto r = run({"transform", "--kernel", "exp(delta=1)", "--lambda",
                        "1", "--out", path});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "lambda,re,im,err_est");
    std::remove(path.c_str());
}

TEST_CASE("help is served on stdout with status 0") {
    const auto r = run({"--help"});
    CHECK(r.status == 0);
    CHECK(r.out.find("transform") != std::string::npos);
    CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("usage errors exit with status 2 and an explanation") {
    CHECK(run({}).status == 2);
    CHECK(run({"no-such-command"}).status == 2);
    CHECK(run({"transform"}).status == 2);  // --kernel is required
    const auto bad_kernel = run({"transform", "--kernel", "exp(delta=,)",
                                 "--lambda", "1"});
    CHECK(bad_kernel.status == 2);
    CHECK(!bad_kernel.err.empty());
    // a grid needs both ends
    CHECK(run({"transform", "--kernel", "exp(delta=1)", "--lambda-min", "1"})
              .status == 2);
    // nonpositive lambda
    CHECK(run({"transform", "--kernel", "exp(delta=1)", "--lambda", "-1"})
              .status == 2);
    CHECK(run({"lemma-check", "--which", "nonsense"}).status == 2);
    CHECK(run({"lemma-check", "--which", "lemma2"}).status == 2);  // needs --p
    // validation failures map to 2 as well
    CHECK(run({"transform", "--kernel", "exp(delta=-1)", "--lambda", "1"})
              .status == 2);
    CHECK(run({"transform", "--kernel", "table:/no/such/file.csv", "--lambda",
               "1"})
              .status == 2);
    // unwritable output location
    CHECK(run({"transform", "--kernel", "exp(delta=1)", "--lambda", "1",
               "--out", "/no/such/dir/out.csv"})
              .status == 2);
}

TEST_CASE("computation failures exit with status 1") {
    // mass 1e300/1e-300 overflows to infinity; the transform refuses to run
    const auto r = run({"transform", "--kernel",
                        "scale(1e300,exp(delta=1e-300))", "--lambda", "1"});
    CHECK(r.status == 1);
    CHECK(!r.err.empty());
}
