#include "polyflood/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyflood {
namespace {

struct Curve {
  double mu;
  FluxContext ctx;
  const PhysicsModel* model;

  double F(double s) const { return flux_mu(s, mu, ctx, *model); }
  double Fs(double s) const { return flux_ds_mu(s, mu, ctx, *model); }
};

// K enters the flux only through the gravity coefficient.
bool same_context(const FluxContext& a, const FluxContext& b, const PhysicsModel& model) {
  return a.v == b.v && gravity_coefficient(a, model) == gravity_coefficient(b, model);
}

template <class G>
double bisect(G&& g, double lo, double hi, double tol = 1e-15) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// min (want_min) or max over [a,b] of F using its single interior critical point.
double scalar_extremum(const Curve& cv, double a, double b, bool want_min) {
  double best = want_min ? std::min(cv.F(a), cv.F(b)) : std::max(cv.F(a), cv.F(b));
  if (auto cp = critical_saturation_mu(cv.mu, cv.ctx, *cv.model); cp && cp->s > a && cp->s < b) {
    const double fc = cv.F(cp->s);
    best = want_min ? std::min(best, fc) : std::max(best, fc);
  }
  return best;
}

double osher(const Curve& cv, double sl, double sr) {
  if (sl == sr) return cv.F(sl);
  return sl < sr ? scalar_extremum(cv, sl, sr, true) : scalar_extremum(cv, sr, sl, false);
}

// Phi(s) = F(s)/(s+hbar): flux of the Lagrangian scalar law in w = -1/(s+hbar).
class Lagrangian {
 public:
  Lagrangian(const Curve& cv, double hbar) : cv_(cv), hbar_(hbar) {
    constexpr int kScan = 256;
    auto q = [&](double s) { return cv_.Fs(s) * (s + hbar_) - cv_.F(s); };
    double s0 = 1e-9;
    double q0 = q(s0);
    for (int k = 1; k <= kScan; ++k) {
      const double s1 = k == kScan ? 1.0 - 1e-9 : static_cast<double>(k) / kScan;
      const double q1 = q(s1);
      if (q1 == 0.0) {
        crit_.push_back(s1);
      } else if (q0 != 0.0 && (q0 < 0.0) != (q1 < 0.0)) {
        crit_.push_back(bisect(q, s0, s1));
      }
      s0 = s1;
      q0 = q1;
    }
  }

  double phi(double s) const { return cv_.F(s) / (s + hbar_); }

  // Extremal point of phi on [a,b]; equal values resolved toward `prefer_high`.
  double arg_extremum(double a, double b, bool want_min, bool prefer_high) const {
    double best_s = a;
    double best_v = phi(a);
    auto consider = [&](double s) {
      const double v = phi(s);
      const bool better = want_min ? v < best_v : v > best_v;
      if (better || (v == best_v && prefer_high)) {
        best_s = s;
        best_v = v;
      }
    };
    for (double c : crit_)
      if (c > a && c < b) consider(c);
    consider(b);
    return best_s;
  }

  // Godunov (Osher) flux of phi for left state a and right state b.
  double godunov(double a, double b) const {
    if (a <= b) return phi(arg_extremum(a, b, true, false));
    return phi(arg_extremum(b, a, false, false));
  }

 private:
  Curve cv_;
  double hbar_;
  std::vector<double> crit_;
};

struct Classified {
  bool scalar = true;
  double hbar = 0.0;
};

Classified classify(const RiemannProblem& p, const PhysicsModel& model, const RiemannOptions& opt) {
  Classified out;
  double hbar = -1.0;
  for (int l = 0; l < model.m; ++l) {
    const auto k = static_cast<size_t>(l);
    const double cl = p.left.c[k];
    const double cr = p.right.c[k];
    if (std::abs(cl - cr) <= opt.c_equal_tol) continue;
    if (!opt.allow_increasing_c && cl < cr)
      throw UnsupportedRiemann("riemann: c_L < c_R in component " + std::to_string(l + 1));
    const double h = secant_adsorption(cl, cr, model.ads(l));
    if (hbar < 0.0) {
      hbar = h;
    } else if (std::abs(h - hbar) > 1e-12 * std::max(1.0, hbar)) {
      throw UnsupportedRiemann("riemann: jumping components have different adsorption secants");
    }
  }
  if (hbar >= 0.0) {
    out.scalar = false;
    out.hbar = hbar;
  }
  if (!same_context(p.ctx_left, p.ctx_right, model)) {
    throw UnsupportedRiemann("riemann: flux context differs across the interface");
  }
  return out;
}

// Scalar fan from sa to sb along the graph y(t), t = +-s, via its lower convex hull.
std::vector<Wave> scalar_waves(double sa, double sb, const Conc& c, const FluxContext& ctx,
                               const PhysicsModel& model) {
  std::vector<Wave> waves;
  if (sa == sb) return waves;
  const Curve cv{model.mu_w(c), ctx, &model};
  const double sign = sa < sb ? 1.0 : -1.0;
  auto y = [&](double t) { return sign * cv.F(sign * t); };
  auto dy = [&](double t) { return cv.Fs(sign * t); };
  const double t0 = sign * sa;
  const double t1 = sign * sb;

  constexpr int kN = 2048;
  std::vector<double> tg(kN + 1), yg(kN + 1);
  for (int k = 0; k <= kN; ++k) {
    tg[k] = k == kN ? t1 : t0 + (t1 - t0) * k / kN;
    yg[k] = y(tg[k]);
  }
  std::vector<int> hull;
  for (int k = 0; k <= kN; ++k) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double cross = (tg[b] - tg[a]) * (yg[k] - yg[a]) - (yg[b] - yg[a]) * (tg[k] - tg[a]);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  // Chords spanning grid points where the graph lies strictly above them are shocks.
  struct Piece {
    bool shock;
    double ta, tb;
  };
  std::vector<Piece> pieces;
  const double yscale = 1e-13 * (1.0 + std::abs(ctx.v) + std::abs(gravity_coefficient(ctx, model)));
  for (size_t h = 0; h + 1 < hull.size(); ++h) {
    const int a = hull[h];
    const int b = hull[h + 1];
    bool chord = false;
    if (b - a > 1) {
      const double slope = (yg[b] - yg[a]) / (tg[b] - tg[a]);
      for (int k = a + 1; k < b && !chord; ++k)
        chord = yg[k] - (yg[a] + slope * (tg[k] - tg[a])) > yscale;
    }
    if (!chord && !pieces.empty() && !pieces.back().shock) {
      pieces.back().tb = tg[b];
    } else {
      pieces.push_back({chord, tg[a], tg[b]});
    }
  }

  // Refine tangency points of interior shock endpoints.
  const double dt = (t1 - t0) / kN;
  for (size_t p = 0; p < pieces.size(); ++p) {
    if (!pieces[p].shock) continue;
    double P = pieces[p].ta;
    double Q = pieces[p].tb;
    const bool p_free = P != t0;
    const bool q_free = Q != t1;
    for (int it = 0; it < 60 && (p_free || q_free); ++it) {
      const double P_old = P, Q_old = Q;
      if (p_free) {
        auto phi = [&](double s) { return y(Q) - y(s) - dy(s) * (Q - s); };
        const double lo = std::max(t0, P - 2 * dt);
        const double hi = std::min(Q, P + 2 * dt);
        if ((phi(lo) < 0.0) != (phi(hi) < 0.0)) P = bisect(phi, lo, hi, 1e-16);
      }
      if (q_free) {
        auto phi = [&](double s) { return y(s) - y(P) - dy(s) * (s - P); };
        const double lo = std::max(P, Q - 2 * dt);
        const double hi = std::min(t1, Q + 2 * dt);
        if ((phi(lo) < 0.0) != (phi(hi) < 0.0)) Q = bisect(phi, lo, hi, 1e-16);
      }
      if (std::abs(P - P_old) < 1e-16 && std::abs(Q - Q_old) < 1e-16) break;
    }
    pieces[p].ta = P;
    pieces[p].tb = Q;
    if (p > 0) pieces[p - 1].tb = P;
    if (p + 1 < pieces.size()) pieces[p + 1].ta = Q;
  }

  for (const Piece& pc : pieces) {
    if (!(pc.tb > pc.ta)) continue;
    Wave w;
    w.in = State{sign * pc.ta, c};
    w.out = State{sign * pc.tb, c};
    w.ctx = ctx;
    if (pc.shock) {
      w.type = WaveType::Shock;
      w.speed_lo = w.speed_hi = (y(pc.tb) - y(pc.ta)) / (pc.tb - pc.ta);
    } else {
      w.type = WaveType::Rarefaction;
      w.speed_lo = dy(pc.ta);
      w.speed_hi = dy(pc.tb);
    }
    waves.push_back(w);
  }
  return waves;
}

}  // namespace

double scalar_godunov_flux(double s_left, double s_right, double mu_w, const FluxContext& ctx,
                           const PhysicsModel& model) {
  return osher(Curve{mu_w, ctx, &model}, s_left, s_right);
}

ContactTraces contact_traces(const RiemannProblem& p, double hbar, const PhysicsModel& model) {
  const Lagrangian L(Curve{model.mu_w(p.left.c), p.ctx_left, &model}, hbar);
  const Lagrangian R(Curve{model.mu_w(p.right.c), p.ctx_right, &model}, hbar);
  const double sl = p.left.s;
  const double sr = p.right.s;
  // G_L(sl, o) falls and G_R(o, sr) rises in o; the interface flux sits at the crossing.
  auto gap = [&](double o) { return L.godunov(sl, o) - R.godunov(o, sr); };
  double lo = 0.0, hi = 1.0;
  double o = 0.0;
  if (gap(0.0) <= 0.0) {
    o = 0.0;
  } else if (gap(1.0) >= 0.0) {
    o = 1.0;
  } else {
    for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    o = hi;
  }
  ContactTraces tr;
  tr.s_minus = o >= sl ? L.arg_extremum(sl, o, true, false) : L.arg_extremum(o, sl, false, true);
  tr.s_plus = o <= sr ? R.arg_extremum(o, sr, true, true) : R.arg_extremum(sr, o, false, false);
  tr.sigma = 0.5 * (L.phi(tr.s_minus) + R.phi(tr.s_plus));
  return tr;
}

InterfaceFlux godunov_interface_flux(const RiemannProblem& p, const PhysicsModel& model,
                                     const RiemannOptions& options) {
  const Classified cls = classify(p, model, options);
  const Curve left{model.mu_w(p.left.c), p.ctx_left, &model};
  if (cls.scalar) {
    const double F = osher(left, p.left.s, p.right.s);
    return {F, F > 0.0};
  }
  const Curve right{model.mu_w(p.right.c), p.ctx_right, &model};
  const ContactTraces tr = contact_traces(p, cls.hbar, model);
  if (tr.sigma >= 0.0) return {osher(left, p.left.s, tr.s_minus), true};
  return {osher(right, tr.s_plus, p.right.s), false};
}

WaveFan solve(const RiemannProblem& p, const PhysicsModel& model, const RiemannOptions& options) {
  if (model.m > 2) throw UnsupportedRiemann("riemann: exact solve restricted to m <= 2");
  const Classified cls = classify(p, model, options);
  WaveFan fan;
  fan.left = p.left;
  fan.right = p.right;
  if (cls.scalar) {
    fan.waves = scalar_waves(p.left.s, p.right.s, p.left.c, p.ctx_left, model);
  } else {
    fan.hbar = cls.hbar;
    const ContactTraces tr = contact_traces(p, cls.hbar, model);
    fan.waves = scalar_waves(p.left.s, tr.s_minus, p.left.c, p.ctx_left, model);
    Wave contact;
    contact.type = WaveType::Contact;
    contact.in = State{tr.s_minus, p.left.c};
    contact.out = State{tr.s_plus, p.right.c};
    contact.speed_lo = contact.speed_hi = tr.sigma;
    contact.ctx = p.ctx_left;
    fan.waves.push_back(contact);
    for (const Wave& w : scalar_waves(tr.s_plus, p.right.s, p.right.c, p.ctx_right, model))
      fan.waves.push_back(w);
  }
  for (const Wave& w : fan.waves)
    fan.pattern += w.type == WaveType::Rarefaction ? 'R' : w.type == WaveType::Shock ? 'S' : 'C';
  return fan;
}

State sample(const WaveFan& fan, double xi, const PhysicsModel& model) {
  State current = fan.left;
  for (const Wave& w : fan.waves) {
    if (xi < w.speed_lo) return current;
    if (w.type == WaveType::Rarefaction && xi <= w.speed_hi) {
      const Curve cv{model.mu_w(w.in.c), w.ctx, &model};
      const double a = w.in.s;
      const double b = w.out.s;
      auto g = [&](double u) { return cv.Fs(a + u * (b - a)) - xi; };
      const double u = bisect(g, 0.0, 1.0, 1e-15);
      return State{a + u * (b - a), w.in.c};
    }
    current = w.out;
  }
  return current;
}

double match_c_wave(double s_from, const Conc& c_from, const Conc& c_to, double hbar,
                    const FluxContext& ctx_from, const FluxContext& ctx_to,
                    const PhysicsModel& model) {
  if (c_from == c_to && same_context(ctx_from, ctx_to, model)) return s_from;
  const Curve src{model.mu_w(c_from), ctx_from, &model};
  const Curve dst{model.mu_w(c_to), ctx_to, &model};
  const double sigma = src.F(s_from) / (s_from + hbar);
  auto g = [&](double s) { return dst.F(s) / (s + hbar) - sigma; };
  std::vector<double> roots;
  constexpr int kScan = 1024;
  const double tol = 1e-14 * (1.0 + std::abs(sigma));
  double s0 = 0.0, g0 = g(0.0);
  if (std::abs(g0) <= tol) roots.push_back(0.0);
  for (int k = 1; k <= kScan; ++k) {
    const double s1 = static_cast<double>(k) / kScan;
    const double g1 = g(s1);
    if (std::abs(g1) <= tol) {
      roots.push_back(s1);
    } else if (std::abs(g0) > tol && (g0 < 0.0) != (g1 < 0.0)) {
      roots.push_back(bisect(g, s0, s1));
    }
    s0 = s1;
    g0 = g1;
  }
  double best = -1.0;
  for (double r : roots) {
    if (dst.Fs(r) < -1e-12) continue;
    if (best < 0.0 || std::abs(r - s_from) < std::abs(best - s_from)) best = r;
  }
  if (best < 0.0) throw UnsupportedRiemann("riemann: secant line misses the admissible branch");
  return best;
}

}  // namespace polyflood
