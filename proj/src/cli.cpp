// SPDX-License-Identifier: Apache-2.0
#include "hartogs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hartogs/algebraic.hpp"
#include "hartogs/diophantine.hpp"
#include "hartogs/errors.hpp"
#include "hartogs/parse.hpp"
#include "hartogs/series.hpp"
#include "hartogs/theta.hpp"

namespace hartogs {

namespace {

std::string g17(const BigFloat& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", mpfr_get_d(v.raw(), MPFR_RNDN));
  return buf;
}

std::string g3(const BigFloat& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", mpfr_get_d(v.raw(), MPFR_RNDU));
  return buf;
}

const char* status_name(CertStatus s) {
  switch (s) {
    case CertStatus::Exact: return "exact";
    case CertStatus::Interval: return "interval";
    default: return "failed";
  }
}

struct GridSpec {
  ExactReal x0, x1, y0, y1;
  long res = 0;
};

GridSpec parse_grid(const std::string& src) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t colon = src.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(src.substr(start));
      break;
    }
    parts.push_back(src.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() != 5)
    throw parse_error(0, "grid must be x0:x1:y0:y1:res");
  GridSpec g;
  g.x0 = parse_real(parts[0]);
  g.x1 = parse_real(parts[1]);
  g.y0 = parse_real(parts[2]);
  g.y1 = parse_real(parts[3]);
  mpq_class res = parse_rational(parts[4]);
  if (res.get_den() != 1 || res < 2)
    throw precondition_error("grid resolution must be an integer >= 2");
  if (!res.get_num().fits_slong_p())
    throw precondition_error("grid resolution too large");
  g.res = res.get_num().get_si();
  return g;
}

// Resolve the effective output stream: "-" means the default stream.
struct Sink {
  std::ostream* os;
  std::ofstream file;
  Sink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      os = &fallback;
    } else {
      file.open(path);
      if (!file) throw precondition_error("cannot open output file: " + path);
      os = &file;
    }
  }
};

ThetaContext make_context(const std::string& tau0_text, long prec) {
  return ThetaContext(parse_complex(tau0_text), PrecisionBudget(mpfr_prec_t(prec)));
}

void print_numeric_series(std::ostream& os, const NumericSeries& s) {
  for (long k = 0; k <= s.order; ++k) {
    const BallComplex& v = s.c[size_t(k)];
    BigFloat rad = fmax(v.re().rad(), v.im().rad());
    os << k << " re=" << g17(v.re().mid()) << " im=" << g17(v.im().mid())
       << " rad<=" << g3(rad) << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"certified arithmetic for theta-coefficient power series and algebraic branches"};
  app.name("hartogs");
  app.require_subcommand(1);

  // Option storage; subcommands with different defaults get their own slots.
  std::string tau0_text = "0+1i";
  std::string x_text, y_text = "0", at_text, phi_text, seed_text, grid_text;
  std::string out_path = "-";
  long prec = 128;
  long terms_scan = 25, window_scan = 6;
  long terms_lift = 16, terms_alg = 64, window_alg = 8;
  long max_n_fact = 20, max_n_wit = 200, max_n_cert = 15;
  int cell_level = 4;

  CLI::App* theta = app.add_subcommand("theta", "theta function evaluation");
  theta->require_subcommand(1);
  CLI::App* theta_eval = theta->add_subcommand("eval", "evaluate theta11 at a point");
  theta_eval->add_option("--tau0", tau0_text, "modulus a+bi, Im > 0")->capture_default_str();
  theta_eval->add_option("--at", at_text, "evaluation point a+bi")->required();
  theta_eval->add_option("--prec", prec, "working precision in bits")->capture_default_str();

  CLI::App* dioph = app.add_subcommand("dioph", "factoradic expansion and witnesses");
  dioph->require_subcommand(1);
  CLI::App* dioph_fact = dioph->add_subcommand("factoradic", "stream factoradic digits");
  dioph_fact->add_option("--x", x_text, "exact real seed")->required();
  dioph_fact->add_option("--max-n", max_n_fact, "number of digits")->capture_default_str();
  dioph_fact->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  CLI::App* dioph_wit = dioph->add_subcommand("witnesses", "certified small-divisor witnesses");
  dioph_wit->add_option("--x", x_text, "exact irrational seed")->required();
  dioph_wit->add_option("--max-n", max_n_wit, "largest index to scan")->capture_default_str();
  dioph_wit->add_option("--prec", prec, "working precision in bits")->capture_default_str();

  CLI::App* cex = app.add_subcommand("cex", "model series classification");
  cex->require_subcommand(1);
  CLI::App* cex_scan = cex->add_subcommand("scan", "classify a rational grid to CSV");
  cex_scan->add_option("--grid", grid_text, "x0:x1:y0:y1:res")->required();
  cex_scan->add_option("--tau0", tau0_text, "modulus a+bi, Im > 0")->capture_default_str();
  cex_scan->add_option("--terms", terms_scan, "coefficients per point")->capture_default_str();
  cex_scan->add_option("--window", window_scan, "tail window width")->capture_default_str();
  cex_scan->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  cex_scan->add_option("--out", out_path, "output file or - for stdout")->capture_default_str();
  CLI::App* cex_cert = cex->add_subcommand("certify", "divergence certificate at a point");
  cex_cert->add_option("--tau0", tau0_text, "modulus a+bi, Im > 0")->capture_default_str();
  cex_cert->add_option("--x", x_text, "exact real x coordinate")->required();
  cex_cert->add_option("--y", y_text, "exact real y coordinate")->capture_default_str();
  cex_cert->add_option("--max-n", max_n_cert, "largest witness index")->capture_default_str();
  cex_cert->add_option("--cell-level", cell_level, "cell refinement level")->capture_default_str();
  cex_cert->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  CLI::App* cex_term = cex->add_subcommand("terminate", "exact termination index at a rational point");
  cex_term->add_option("--x", x_text, "rational x coordinate")->required();
  cex_term->add_option("--y", y_text, "rational y coordinate")->capture_default_str();

  CLI::App* alg = app.add_subcommand("alg", "algebraic branch lifting and radii");
  alg->require_subcommand(1);
  CLI::App* alg_lift = alg->add_subcommand("lift", "Newton-Hensel branch lift");
  alg_lift->add_option("--phi", phi_text, "relation in z, w, X")->required();
  alg_lift->add_option("--terms", terms_lift, "truncation order")->capture_default_str();
  alg_lift->add_option("--at", at_text, "numeric mode: sample point a+bi");
  alg_lift->add_option("--seed", seed_text, "initial root at w=0 (a+bi)");
  alg_lift->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  CLI::App* alg_radius = alg->add_subcommand("radius", "growth radius vs locus distance at a point");
  alg_radius->add_option("--phi", phi_text, "relation in z, w, X")->required();
  alg_radius->add_option("--at", at_text, "sample point a+bi")->required();
  alg_radius->add_option("--terms", terms_alg, "lifted coefficients")->capture_default_str();
  alg_radius->add_option("--window", window_alg, "tail window width")->capture_default_str();
  alg_radius->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  CLI::App* alg_cons = alg->add_subcommand("consistency", "radius-vs-locus report over samples");
  alg_cons->add_option("--phi", phi_text, "relation in z, w, X")->required();
  std::vector<std::string> at_list;
  alg_cons->add_option("--at", at_list, "sample points a+bi (repeatable)")->required();
  alg_cons->add_option("--terms", terms_alg, "lifted coefficients per sample")->capture_default_str();
  alg_cons->add_option("--window", window_alg, "tail window width")->capture_default_str();
  alg_cons->add_option("--prec", prec, "working precision in bits")->capture_default_str();
  alg_cons->add_option("--out", out_path, "output file or - for stdout")->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("hartogs");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    PrecisionBudget budget{mpfr_prec_t(prec)};

    if (theta_eval->parsed()) {
      ThetaContext ctx = make_context(tau0_text, prec);
      BallComplex z = parse_complex(at_text).eval(budget.bits);
      BallComplex v = theta11_direct(z, ctx.tau(budget.bits), budget.bits);
      BigFloat rad = fmax(v.re().rad(), v.im().rad());
      out << "re=" << g17(v.re().mid()) << " im=" << g17(v.im().mid())
          << " rad<=" << g3(rad) << "\n";
      LogMagnitude lm = log_abs_theta(z, ctx);
      if (lm.neg_inf)
        out << "log_abs=-inf (lattice point)\n";
      else
        out << "log_abs=" << g17(lm.value.mid()) << "\n";
      return 0;
    }

    if (dioph_fact->parsed()) {
      ExactReal x = parse_real(x_text);
      FactoradicStream stream(x);
      for (long k = 1; k <= max_n_fact; ++k) {
        const FactoradicStep& s = stream.next();
        Ball b = s.b.eval(budget);
        out << "k=" << s.k << " a=" << s.a.get_str() << " E=" << s.e_fact.get_str()
            << " b=" << g17(b.mid()) << "\n";
      }
      return 0;
    }

    if (dioph_wit->parsed()) {
      ExactReal x = parse_real(x_text);
      std::vector<Witness> ws = witness_search(x, unsigned(max_n_wit), budget);
      for (const Witness& w : ws)
        out << "n=" << w.n << " d_abs=" << g17(w.d_abs.mid())
            << " threshold=" << w.threshold.get_str() << "\n";
      out << "count=" << ws.size() << "\n";
      return 0;
    }

    if (cex_scan->parsed()) {
      GridSpec g = parse_grid(grid_text);
      ThetaContext ctx = make_context(tau0_text, prec);
      ScanOptions opts;
      opts.terms = terms_scan;
      opts.window = window_scan;
      opts.cell_level = cell_level;
      opts.budget = budget;
      std::vector<PointResult> rows = scan_grid(g.x0, g.x1, g.y0, g.y1, g.res, ctx, opts);
      Sink sink(out_path, out);
      write_scan_csv(*sink.os, rows);
      return 0;
    }

    if (cex_cert->parsed()) {
      ThetaContext ctx = make_context(tau0_text, prec);
      ExactPoint p{parse_real(x_text), parse_real(y_text)};
      DivergenceCertificate cert = divergence_certificate(p, ctx, max_n_cert, cell_level);
      out << "coord=" << cert.witness_coord << " c_lower=" << g17(cert.c_lower.lo())
          << " m_lower=" << g17(cert.m_lower.lo()) << " n_max=" << cert.n_max
          << " witnesses=" << cert.witnesses.size() << " max_gap=" << cert.max_gap
          << " certified=" << (cert.certified ? "yes" : "no");
      if (cert.failed_at) out << " failed_at=" << *cert.failed_at;
      out << "\n";
      for (const CertifiedWitness& w : cert.witnesses) {
        out << "n=" << w.n << " lattice=" << status_name(w.lattice_sign)
            << " cell=" << status_name(w.cell_minimum)
            << " distance=" << status_name(w.distance)
            << " threshold=" << status_name(w.threshold);
        if (w.ok) out << " log_lower>=" << g17(w.log_lower.lo());
        out << " ok=" << (w.ok ? 1 : 0) << "\n";
      }
      return 0;
    }

    if (cex_term->parsed()) {
      ExactPoint p{parse_real(x_text), parse_real(y_text)};
      out << "n0=" << rational_termination(p) << "\n";
      return 0;
    }

    if (alg_lift->parsed()) {
      XPoly phi = parse_poly(phi_text);
      if (at_text.empty()) {
        if (seed_text.empty())
          throw precondition_error("exact lift requires --seed (a Gaussian rational)");
        RationalFunc f0(parse_complex(seed_text));
        ExactSeries f = hensel_lift_exact(phi, f0, terms_lift);
        out << f.str();
        return 0;
      }
      GaussRat z0 = parse_complex(at_text);
      mpfr_prec_t bits = std::max(budget.bits, mpfr_prec_t(2 * terms_lift + 128));
      BallComplex x0 = BallComplex::exact_zero(bits);
      if (!seed_text.empty()) {
        BallComplex s = parse_complex(seed_text).eval(bits);
        BigFloat margin = BigFloat::of_double(1e-3);
        x0 = BallComplex(s.re().widened(margin), s.im().widened(margin));
      } else {
        long t = phi.t();
        std::vector<BallComplex> fiber(size_t(t) + 1, BallComplex::exact_zero(bits));
        BallComplex zb = z0.eval(bits);
        for (long j = 0; j <= t; ++j)
          fiber[size_t(t - j)] = phi.coeff(j).w_coeff(0).eval(zb, bits);
        std::vector<RootDisk> disks = roots_univar(fiber, true, bits);
        const RootDisk* seed = nullptr;
        for (const RootDisk& d : disks)
          if (d.certified_simple) {
            seed = &d;
            break;
          }
        if (!seed) throw root_not_certified("no certified simple root at w=0 to seed the lift");
        BigFloat wider = fmul(seed->radius, BigFloat::of_long(4, 64), 64, MPFR_RNDU);
        BigFloat margin = BigFloat::of_double(1e-6);
        if (wider.cmp(margin) < 0) wider = margin;
        x0 = BallComplex(seed->center.re().widened(wider), seed->center.im().widened(wider));
      }
      NumericSeries f =
          hensel_lift_numeric(phi, z0, x0, terms_lift, PrecisionBudget(bits, budget.max_restarts));
      print_numeric_series(out, f);
      return 0;
    }

    if (alg_radius->parsed()) {
      XPoly phi = parse_poly(phi_text);
      GaussRat z0 = parse_complex(at_text);
      ConsistencyReport rep = radius_locus_consistency(phi, {z0}, terms_alg, window_alg, budget);
      const ConsistencyRow& r = rep.rows.at(0);
      out << "z0=" << r.z0.str() << " growth=";
      if (r.growth_verdict == Verdict::Finite && r.growth_radius)
        out << g17(r.growth_radius->mid());
      else
        out << verdict_name(r.growth_verdict);
      out << " locus=";
      if (r.sing_infinite)
        out << "infinite";
      else if (r.sing_radius)
        out << g17(r.sing_radius->mid());
      out << "\n";
      return 0;
    }

    if (alg_cons->parsed()) {
      XPoly phi = parse_poly(phi_text);
      std::vector<GaussRat> samples;
      for (const std::string& s : at_list) samples.push_back(parse_complex(s));
      ConsistencyReport rep = radius_locus_consistency(phi, samples, terms_alg, window_alg, budget);
      Sink sink(out_path, out);
      render_report(*sink.os, rep);
      return 0;
    }

    err << "error: no subcommand selected\n";
    return 2;
  } catch (const error& e) {
    switch (e.kind()) {
      case error_kind::parse:
        err << "parse error: " << e.what() << "\n";
        return 2;
      case error_kind::precondition:
        err << "precondition violated: " << e.what() << "\n";
        return 3;
      default:
        err << "precision exhausted: " << e.what() << "\n";
        return 4;
    }
  }
}

}  // namespace hartogs
