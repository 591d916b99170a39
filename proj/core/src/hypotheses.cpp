#include "allee/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "allee/errors.hpp"

namespace allee {

bool HypothesisReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const HypothesisCheck& c) { return c.status == CheckStatus::Fail; });
}

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

InvariantBox invariant_box(const ModelSystem& m) {
  InvariantBox box;
  const RootBounds kp = upper_root_bounds(m.growth, m.period);
  box.epsilon = 0.01 * kp.upper;
  box.n_max = kp.upper + box.epsilon;
  constexpr int kGrid = 1000;
  double r_bar = -INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    const double t = m.period * i / kGrid;
    r_bar = std::max(r_bar, m.growth.value(t, growth_peak(m.growth, t)));
  }
  box.r_bar = r_bar;
  switch (m.family) {
    case Family::PredatorPrey:
      box.p_max = m.gamma.upper() * box.n_max * (1.0 + r_bar / m.delta1.lower());
      break;
    case Family::LeslieGower: box.p_max = box.n_max + m.c.upper(); break;
    case Family::LeslieGowerPM:
      box.p_max = m.c2_or_a.upper() * (box.n_max + m.c.upper());
      break;
  }
  return box;
}

bool in_absorbing_set(const ModelSystem& m, const InvariantBox& box, State x, double slack) {
  if (x.n < -slack || x.p < -slack) return false;
  if (x.n > box.n_max + slack) return false;
  if (m.family == Family::PredatorPrey) {
    const double gbar = m.gamma.upper();
    const double bound = box.n_max * (1.0 + box.r_bar / m.delta1.lower());
    return x.n + x.p / gbar <= bound + slack;
  }
  return x.p <= box.p_max + slack;
}

namespace {

struct Recorder {
  HypothesisReport& report;

  void add(std::string name, bool ok, std::string detail) {
    report.checks.push_back(
        {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)});
  }
  void warn(std::string name, std::string detail) {
    report.checks.push_back({std::move(name), CheckStatus::Warning, std::move(detail)});
  }
};

std::string at_time(double t) {
  std::ostringstream os;
  os << "first violation at t=" << t;
  return os.str();
}

// Relative tolerance for sign checks right next to a root.
constexpr double kRootGuard = 1e-9;

void check_growth(const ModelSystem& m, int grid, Recorder& rec) {
  const GrowthFunction& g = m.growth;
  const double period = m.period;
  const bool strong = g.allee() == AlleeKind::Strong;
  const std::string p = strong ? "gs" : "gw";

  // Roots.
  std::vector<double> kplus(grid), kminus(grid, 0.0), xi(grid);
  bool roots_ok = true;
  std::string roots_detail;
  for (int i = 0; i < grid && roots_ok; ++i) {
    const double t = period * i / grid;
    try {
      kplus[i] = upper_root(g, t);
      if (!(kplus[i] > 0.0)) {
        roots_ok = false;
        roots_detail = "K+(t) not positive; " + at_time(t);
      }
      if (strong) {
        const auto km = lower_root(g, t);
        if (!km || !(*km > 0.0)) {
          roots_ok = false;
          roots_detail = "K-(t) missing or not positive; " + at_time(t);
        } else {
          kminus[i] = *km;
        }
      }
      if (std::abs(g.value(t, kplus[i])) > 1e-12 * std::max(1.0, std::abs(g.r(t)))) {
        roots_ok = false;
        roots_detail = "k(t, K+(t)) != 0; " + at_time(t);
      }
    } catch (const ModelError& e) {
      roots_ok = false;
      roots_detail = e.what();
    }
  }
  double kminus_max = 0.0;
  double kplus_min = INFINITY;
  if (roots_ok) {
    kminus_max = *std::max_element(kminus.begin(), kminus.end());
    kplus_min = *std::min_element(kplus.begin(), kplus.end());
    if (strong && g.kind != GrowthFunction::Kind::Custom) {
      kminus_max = g.k_minus.upper();
      kplus_min = g.k_plus.lower();
    }
  }
  if (strong) {
    bool ordered = roots_ok && kminus_max < kplus_min;
    std::ostringstream os;
    if (!roots_ok) {
      os << roots_detail;
    } else {
      os << "max K- = " << kminus_max << ", min K+ = " << kplus_min;
    }
    rec.add("gs1", ordered, os.str());
  } else {
    rec.add("gw1", roots_ok, roots_ok ? "K+(t) > 0 located for every sampled t" : roots_detail);
  }
  if (!roots_ok) return;

  // Sign at the origin and sign pattern.
  {
    bool ok = true;
    std::string detail = strong ? "k(t,0) < 0 and sign pattern holds" : "k(t,0) > 0";
    const double n_top = 1.5 * *std::max_element(kplus.begin(), kplus.end());
    for (int i = 0; i < grid && ok; ++i) {
      const double t = period * i / grid;
      const double k0 = g.value(t, 0.0);
      if (strong ? !(k0 < 0.0) : !(k0 > 0.0)) {
        ok = false;
        detail = std::string("k(t,0) has the wrong sign; ") + at_time(t);
        break;
      }
      for (int j = 1; j <= 4 * grid; ++j) {
        const double n = n_top * j / (4 * grid);
        const double scale = kRootGuard * std::max(1.0, n);
        if (std::abs(n - kplus[i]) < scale) continue;
        if (strong && std::abs(n - kminus[i]) < scale) continue;
        const double k = g.value(t, n);
        const double shape = strong ? (n - kminus[i]) * (kplus[i] - n) : (kplus[i] - n);
        if (!(k * shape > 0.0)) {
          ok = false;
          std::ostringstream os;
          os << "k(t,N) sign pattern broken at N=" << n << "; " << at_time(t);
          detail = os.str();
          break;
        }
      }
    }
    rec.add(p + "2", ok, detail);
  }

  // Interior maximum.
  {
    bool ok3 = true;
    bool ok4 = true;
    bool xi_zero = false;
    std::string d3 = "dk/dN vanishes at xi(t) inside the admissible interval";
    std::string d4 = "dk/dN changes sign once, from + to -";
    for (int i = 0; i < grid; ++i) {
      const double t = period * i / grid;
      xi[i] = growth_peak(g, t);
      const bool inside = strong ? (xi[i] > kminus_max && xi[i] < kplus_min)
                                 : (xi[i] >= 0.0 && xi[i] <= kplus_min);
      if (!inside && ok3) {
        ok3 = false;
        std::ostringstream os;
        os << "xi(t)=" << xi[i] << " outside the admissible interval; " << at_time(t);
        d3 = os.str();
      }
      if (!strong && xi[i] == 0.0) xi_zero = true;
      const double n_top = 1.5 * kplus[i];
      for (int j = 0; j <= 4 * grid && ok4; ++j) {
        const double n = n_top * j / (4 * grid);
        if (std::abs(n - xi[i]) < 1e-6 * std::max(1.0, n_top)) continue;
        if (!(g.dn(t, n) * (n - xi[i]) < 0.0)) {
          ok4 = false;
          std::ostringstream os;
          os << "dk/dN (N - xi) >= 0 at N=" << n << "; " << at_time(t);
          d4 = os.str();
        }
      }
    }
    if (ok3 && xi_zero) {
      rec.warn("gw3", "xi(t) = 0 for some t: k(t, .) is monotone decreasing (logistic boundary)");
    } else {
      rec.add(p + "3", ok3, d3);
    }
    rec.add(p + "4", ok4, d4);
  }
}

void check_response(const ModelSystem& m, const InvariantBox& box, int grid, Recorder& rec,
                    HypothesisReport& report) {
  const FunctionalResponse& f = m.response;
  const double period = m.period;
  bool f1 = true, f2 = true, f3 = true, f4 = true, f5 = true;
  std::string d1 = "f(t,0,P) = 0", d2 = "f > 0 for N > 0", d3 = "non-increasing in P",
              d4 = "non-decreasing in N", d5 = "limit f(t,N,P)/N exists as N -> 0+";
  double worst_f0 = 0.0;
  const bool has_analytic = f.kind != FunctionalResponse::Kind::Custom;

  for (int i = 0; i < grid; ++i) {
    const double t = period * i / grid;
    for (int jp = 0; jp <= grid; ++jp) {
      const double pp = box.p_max * jp / grid;
      if (f1 && std::abs(f.value(t, 0.0, pp)) > 1e-14) {
        f1 = false;
        d1 = "f(t,0,P) != 0; " + at_time(t);
      }
      double prev = f.value(t, 0.0, pp);
      for (int jn = 1; jn <= grid; ++jn) {
        const double n = box.n_max * jn / grid;
        const double val = f.value(t, n, pp);
        if (f2 && !(val > 0.0)) {
          f2 = false;
          d2 = "f <= 0 at positive N; " + at_time(t);
        }
        if (f4 && val < prev - 1e-14 * std::max(1.0, std::abs(prev))) {
          f4 = false;
          d4 = "decreasing in N; " + at_time(t);
        }
        prev = val;
      }
    }
    for (int jn = 1; jn <= grid; ++jn) {
      const double n = box.n_max * jn / grid;
      double prev = f.value(t, n, 0.0);
      for (int jp = 1; jp <= grid; ++jp) {
        const double pp = box.p_max * jp / grid;
        const double val = f.value(t, n, pp);
        if (f3 && val > prev + 1e-14 * std::max(1.0, std::abs(prev))) {
          f3 = false;
          d3 = "increasing in P; " + at_time(t);
        }
        prev = val;
      }
    }
    // f5: Richardson extrapolation of q(N) = f/N over N in {h, h/2, h/4},
    // shrinking h while the two first-order estimates still disagree.
    for (int jp = 0; jp <= 4; ++jp) {
      const double pp = box.p_max * jp / 4;
      double limit = 0.0;
      bool settled = false;
      for (double h = 1e-4; h >= 1e-8 && !settled; h *= 0.1) {
        const double q1 = f.value(t, h, pp) / h;
        const double q2 = f.value(t, h / 2, pp) / (h / 2);
        const double q3 = f.value(t, h / 4, pp) / (h / 4);
        const double r1 = 2.0 * q2 - q1;
        const double r2 = 2.0 * q3 - q2;
        limit = (4.0 * r2 - r1) / 3.0;
        settled = std::isfinite(limit) && limit >= -1e-12 &&
                  std::abs(r2 - r1) <= 1e-6 * std::max(1.0, std::abs(limit));
      }
      if (f5 && !settled) {
        f5 = false;
        d5 = "Richardson sequence does not settle; " + at_time(t);
      }
      if (has_analytic) {
        double exact = 0.0;
        if (f.kind == FunctionalResponse::Kind::HollingII) {
          exact = f.b(t) * f.p(t);
        } else {
          exact = f.b(t) / (1.0 + f.p(t) * pp);
        }
        const double rel = std::abs(limit - exact) / std::max(std::abs(exact), 1e-300);
        worst_f0 = std::max(worst_f0, rel);
      }
    }
  }
  if (has_analytic) report.f0_relative_error = worst_f0;
  rec.add("f1", f1, d1);
  rec.add("f2", f2, d2);
  rec.add("f3", f3, d3);
  rec.add("f4", f4, d4);
  rec.add("f5", f5, d5);
}

}  // namespace

HypothesisReport verify_hypotheses(const ModelSystem& m, int grid_size) {
  if (grid_size < 16) throw ModelError("verify_hypotheses: grid_size must be at least 16");
  HypothesisReport report;
  Recorder rec{report};

  try {
    m.validate();
    rec.add("model", true, "coefficients share the model period");
  } catch (const ModelError& e) {
    rec.add("model", false, e.what());
  }

  if (m.family == Family::PredatorPrey) {
    bool d1_ok = true;
    bool gamma_ok = true;
    const bool delta2_zero = m.delta2.identically_zero();
    for (int i = 0; i < grid_size; ++i) {
      const double t = m.period * i / grid_size;
      if (!(m.delta1(t) > 0.0)) d1_ok = false;
      if (!delta2_zero && !(m.gamma(t) > 0.0)) gamma_ok = false;
    }
    rec.add("preliminary:delta1", d1_ok, "delta1(t) > 0");
    rec.add("preliminary:gamma", gamma_ok,
            delta2_zero ? "delta2 identically zero" : "min gamma(t) > 0");
  } else {
    rec.add("preliminary:leslie_gower", m.c.lower() > 0.0 && m.c2_or_a.lower() > 0.0,
            "refuge and predator rate positive");
  }

  check_growth(m, grid_size, rec);

  InvariantBox box;
  try {
    box = invariant_box(m);
  } catch (const ModelError& e) {
    rec.add("invariant_box", false, e.what());
    return report;
  }
  check_response(m, box, grid_size, rec, report);
  return report;
}

}  // namespace allee
