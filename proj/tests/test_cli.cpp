// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: subcommand routing, exit codes, golden output text,
// and the exact input language (rationals, reals with one square root,
// Gaussian rationals, and algebraic relations).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <hartogs/cli.hpp>
#include <hartogs/errors.hpp>
#include <hartogs/exact_real.hpp>
#include <hartogs/parse.hpp>

using namespace hartogs;

namespace {

struct CliResult {
  int code = -1;
  std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

size_t count_of(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("help text lists every subcommand group") {
  CliResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  for (const char* name : {"theta", "dioph", "cex", "alg"}) CHECK(contains(r.out, name));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CliResult r = run_cli({"theta", "eval", "--bogus", "1"});
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
  CHECK(run_cli({"theta", "eval"}).code == 2);  // --at is required
}

TEST_CASE("theta eval reports the enclosure and the log-magnitude") {
  CliResult r = run_cli({"theta", "eval", "--at", "0.5"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "re=-0.9135791381561168 "));
  CHECK(contains(r.out, "log_abs=-0.090385275108931656"));
}

TEST_CASE("theta eval marks lattice points with a -inf log-magnitude") {
  CliResult r = run_cli({"theta", "eval", "--at", "1+1i"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "log_abs=-inf (lattice point)"));
}

TEST_CASE("a modulus outside the upper half-plane exits with code 3") {
  CliResult r = run_cli({"theta", "eval", "--tau0", "1-1i", "--at", "0.5"});
  CHECK(r.code == 3);
  CHECK(contains(r.err, "precondition"));
}

TEST_CASE("factoradic digits of sqrt(2) match the frozen stream") {
  CliResult r = run_cli({"dioph", "factoradic", "--x", "sqrt(2)", "--max-n", "6"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "k=1 a=1 E=1 b=0.41421356237309503\n"
        "k=2 a=1 E=3 b=-0.1715728752538099\n"
        "k=3 a=-1 E=8 b=0.48528137423857032\n"
        "k=4 a=2 E=34 b=-0.058874503045718826\n"
        "k=5 a=0 E=170 b=-0.29437251522859414\n"
        "k=6 a=-2 E=1018 b=0.23376490862843513\n");
}

TEST_CASE("malformed input text exits with code 2 and a parse diagnostic") {
  CliResult r = run_cli({"dioph", "factoradic", "--x", "sqrt(-2)"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "parse error"));
}

TEST_CASE("witness search over sqrt(2) reports thresholds and a count") {
  CliResult r = run_cli({"dioph", "witnesses", "--x", "sqrt(2)", "--max-n", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n=1 d_abs=0.41421356237309503 threshold=1/4\n", 0) == 0);
  CHECK(contains(r.out, "\ncount=29\n"));
  CHECK(!contains(r.out, "n=4 "));  // |d(4! sqrt 2)| < 1/10 is not a witness
}

TEST_CASE("witness search requires an irrational seed") {
  CHECK(run_cli({"dioph", "witnesses", "--x", "3/7"}).code == 3);
}

TEST_CASE("termination index at a rational point") {
  CliResult r = run_cli({"cex", "terminate", "--x", "1/3", "--y", "1/5"});
  CHECK(r.code == 0);
  CHECK(r.out == "n0=5\n");
  CHECK(run_cli({"cex", "terminate", "--x", "sqrt(2)"}).code == 3);
}

TEST_CASE("divergence certificate for sqrt(2) certifies every witness") {
  CliResult r = run_cli({"cex", "certify", "--x", "sqrt(2)", "--max-n", "8"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "coord=x "));
  CHECK(contains(r.out, "witnesses=7"));
  CHECK(contains(r.out, "certified=yes"));
  CHECK(count_of(r.out, " ok=1") == 7);
  CHECK(count_of(r.out, " ok=0") == 0);
}

TEST_CASE("certificates require an irrational coordinate") {
  CHECK(run_cli({"cex", "certify", "--x", "1/2"}).code == 3);
}

TEST_CASE("rational grid scan emits the frozen CSV and is deterministic") {
  std::vector<std::string> args{"cex", "scan", "--grid", "0:1:0:1:3", "--terms", "10"};
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out ==
        "x,y,verdict,n0_or_blank,rho_hat,witness_count\n"
        "0,0,infinite,1,,0\n"
        "0,0.5,infinite,2,,0\n"
        "0,1,infinite,1,,0\n"
        "0.5,0,infinite,2,,0\n"
        "0.5,0.5,infinite,2,,0\n"
        "0.5,1,infinite,2,,0\n"
        "1,0,infinite,1,,0\n"
        "1,0.5,infinite,2,,0\n"
        "1,1,infinite,1,,0\n");
}

TEST_CASE("grid endpoints may be surds; irrational nodes classify as zero") {
  CliResult r = run_cli(
      {"cex", "scan", "--grid", "sqrt(2):sqrt(2)+1:0:1:2", "--terms", "12"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "x,y,verdict,n0_or_blank,rho_hat,witness_count\n"
        "1.4142135623730951,0,zero,,,11\n"
        "1.4142135623730951,1,zero,,,11\n"
        "2.4142135623730949,0,zero,,,11\n"
        "2.4142135623730949,1,zero,,,11\n");
}

TEST_CASE("grid scans reject malformed or degenerate grid descriptors") {
  CHECK(run_cli({"cex", "scan", "--grid", "0:1:0:1"}).code == 2);
  CHECK(run_cli({"cex", "scan", "--grid", "0:1:0:1:1"}).code == 3);
  CHECK(run_cli({"cex", "scan", "--grid", "0:1:0:1:3", "--out",
                 "/nonexistent-dir/scan.csv"})
            .code == 3);
}

TEST_CASE("exact branch lift prints rational-function coefficients") {
  CliResult r = run_cli(
      {"alg", "lift", "--phi", "X^2 - (1 + z*w)", "--seed", "1", "--terms", "3"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "0 num=1 den=1\n"
        "1 num=1/2*z den=1\n"
        "2 num=-1/8*z^2 den=1\n"
        "3 num=1/16*z^3 den=1\n");
  CHECK(run_cli({"alg", "lift", "--phi", "X^2 - (1 + z*w)"}).code == 3);  // no seed
}

TEST_CASE("numeric branch lift auto-seeds the first certified fiber root") {
  CliResult r = run_cli(
      {"alg", "lift", "--phi", "X^2 - (1 + z*w)", "--at", "2", "--terms", "3"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "0 re=-1 im=0"));
  CHECK(contains(r.out, "2 re=0.5 im=0"));
  CliResult s = run_cli({"alg", "lift", "--phi", "X^2 - (1 + z*w)", "--at", "2",
                         "--terms", "3", "--seed", "1"});
  CHECK(s.code == 0);
  CHECK(contains(s.out, "0 re=1 im=0"));
  CHECK(contains(s.out, "2 re=-0.5 im=0"));
}

TEST_CASE("relation text errors exit with code 2 and carry a byte offset") {
  CliResult r = run_cli({"alg", "lift", "--phi", "X^", "--seed", "1"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "(byte offset 2)"));
}

TEST_CASE("growth radius versus locus distance at one sample point") {
  CliResult r = run_cli(
      {"alg", "radius", "--phi", "X^2 - (1 + z*w)", "--at", "2", "--terms", "64"});
  CHECK(r.code == 0);
  CHECK(r.out == "z0=2 growth=0.56586607413497325 locus=0.5\n");
}

TEST_CASE("consistency report renders PASS when both sides are infinite") {
  CliResult r = run_cli({"alg", "consistency", "--phi", "X - (z + w)", "--at", "1",
                         "--at", "2", "--terms", "16", "--window", "4"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "radius-vs-locus consistency: PASS"));
  CHECK(count_of(r.out, "locus=infinite") == 2);
  CHECK(count_of(r.out, "-> pass") == 2);
}

TEST_CASE("input language: rationals, one-root reals, complex numbers, relations") {
  CHECK(parse_rational("1/3") == mpq_class(1, 3));
  CHECK(parse_rational("0.25") == mpq_class(1, 4));
  CHECK(parse_rational("-7") == mpq_class(-7));
  // Leading zeros are decimal, never octal.
  CHECK(parse_rational("025") == mpq_class(25));
  CHECK(parse_rational("0.077") == mpq_class(77, 1000));
  CHECK_THROWS_AS(parse_rational("1/"), parse_error);

  ExactReal golden = parse_real("1/2 + 1/4*sqrt(5)");
  CHECK(golden.cmp(ExactReal::surd(mpq_class(1, 2), mpq_class(1, 4), 5)) == 0);
  ExactReal four = parse_real("sqrt(4)");
  CHECK(four.is_rational());
  CHECK(four.as_rational() == 2);
  CHECK(parse_real("sqrt(8)").cmp(ExactReal::surd(0, 2, 2)) == 0);

  CHECK(parse_complex("1/2-2i") == GaussRat(mpq_class(1, 2), mpq_class(-2)));
  CHECK(parse_complex("-i") == GaussRat(mpq_class(0), mpq_class(-1)));
  CHECK(parse_complex("3") == GaussRat(mpq_class(3)));

  XPoly sq = parse_poly("X^2 - (1 + z*w)");
  CHECK(sq.t() == 2);
  CHECK(sq.is_monic());
  XPoly nm = parse_poly("w*X^2 + X + z");
  CHECK(nm.coeff(0) == BivarPoly::monomial(0, 1, GaussRat(mpq_class(1))));
  try {
    parse_poly("X^");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(e.offset == 2);
  }
}
