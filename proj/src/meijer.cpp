#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <array>
#include <functional>

#include "vhts/specfun.hpp"

namespace vhts::specfun {
namespace {

using cd = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Γ(c + es·s + et·t) in the numerator (num) or denominator.
struct Factor {
    double c;
    int es;
    int et;
    bool num;
};

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

cd log_factor(const Factor& f, cd arg) {
    if (arg.imag() == 0.0 && nonpositive_integer(arg.real())) {
        if (!f.num) return cd(-kInf, 0.0);
        throw DomainError("meijer_g: contour passes through a pole");
    }
    cd lg = ln_gamma(arg);
    return f.num ? lg : -lg;
}

void append_standard(std::vector<Factor>& out, const std::vector<double>& a,
                     const std::vector<double>& b, int m, int n, bool first) {
    auto mk = [first](double c, int e, bool num) {
        return first ? Factor{c, e, 0, num} : Factor{c, 0, e, num};
    };
    for (int j = 0; j < static_cast<int>(b.size()); ++j)
        out.push_back(j < m ? mk(b[j], -1, true) : mk(1.0 - b[j], +1, false));
    for (int j = 0; j < static_cast<int>(a.size()); ++j)
        out.push_back(j < n ? mk(1.0 - a[j], +1, true) : mk(a[j], -1, false));
}

void validate_counts(const std::vector<double>& a, const std::vector<double>& b, int m, int n) {
    if (m < 0 || n < 0 || m > static_cast<int>(b.size()) || n > static_cast<int>(a.size()))
        throw DomainError("meijer_g: require 0 <= m <= q and 0 <= n <= p");
}

// Distance from x to the nearest integer, used for collision detection.
double frac_dist(double x) { return std::abs(x - std::round(x)); }

// Shift left-family parameters whose poles coincide with another family's.
double perturb_collisions(std::vector<Factor>& fs, int var) {
    double total = 0.0;
    auto coef = [var](const Factor& f) { return var == 0 ? f.es : f.et; };
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (auto& fl : fs) {
            if (!fl.num || coef(fl) != +1 || (var == 0 ? fl.et : fl.es) != 0) continue;
            for (const auto& fo : fs) {
                if (&fo == &fl || !fo.num || (var == 0 ? fo.et : fo.es) != 0) continue;
                double d;
                if (coef(fo) == -1)
                    d = fl.c + fo.c;  // left/right collision if nonpositive integer
                else if (coef(fo) == +1)
                    d = -std::abs(fl.c - fo.c);  // left/left double pole
                else
                    continue;
                if (d <= 1e-8 && frac_dist(d) < 1e-8) {
                    fl.c += 1e-6;
                    total += 1e-6;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return total;
}

double scan_half_height(const std::function<double(double)>& logmag, double thr,
                        const char* what) {
    double peak = -kInf;
    int below = 0;
    for (double u = 0.0; u <= 4000.0; u += 0.5) {
        double v = std::max(logmag(u), logmag(-u));
        if (std::isnan(v)) throw ConvergenceError(std::string(what) + ": NaN in integrand envelope");
        if (v > peak) {
            peak = v;
            below = 0;
            continue;
        }
        if (v < peak - thr && u >= 2.0) {
            if (++below >= 4) return u;
        } else {
            below = 0;
        }
    }
    throw ConvergenceError(std::string(what) + ": integrand does not decay along the contour");
}

}  // namespace

GResult meijer_g(const GParams& p, double rel_tol, double step_scale) {
    validate_counts(p.a, p.b, p.m, p.n);
    if (!(p.z > 0.0)) throw DomainError("meijer_g: argument must be positive");

    std::vector<Factor> fs;
    append_standard(fs, p.a, p.b, p.m, p.n, true);
    GResult res;

    const double lz = std::log(p.z);
    auto log_integrand = [&](cd s) {
        cd acc = s * lz;
        for (const auto& f : fs) acc += log_factor(f, f.c + static_cast<double>(f.es) * s);
        return acc;
    };

    double L = -kInf, R = kInf;
    auto family_bounds = [&] {
        L = -kInf;
        R = kInf;
        for (const auto& f : fs) {
            if (!f.num) continue;
            if (f.es == +1) L = std::max(L, -f.c);
            if (f.es == -1) R = std::min(R, f.c);
        }
    };
    family_bounds();
    if (L >= R) {
        // Residue corrections below need simple poles.
        res.plan.perturbation = perturb_collisions(fs, 0);
        family_bounds();
    }
    if (!std::isfinite(L) && !std::isfinite(R))
        throw DomainError("meijer_g: integrand has no gamma factors in the numerator");

    auto pole_distance = [&](double c) {
        double d = kInf;
        for (const auto& f : fs) {
            if (!f.num) continue;
            double base = f.es == +1 ? -f.c : f.c;
            double k = f.es == +1 ? std::max(0.0, std::round(base - c)) : std::max(0.0, std::round(c - base));
            for (double kk : {k - 1, k, k + 1}) {
                if (kk < 0) continue;
                double pole = f.es == +1 ? base - kk : base + kk;
                d = std::min(d, std::abs(pole - c));
            }
        }
        return d;
    };

    double c;
    if (L < R && std::isfinite(L) && std::isfinite(R)) {
        c = 0.5 * (L + R);
    } else if (L < R) {
        // One-sided: place the line near the real-axis saddle of the integrand.
        double lo = std::isfinite(L) ? L + 0.25 : R - 120.0;
        double hi = std::isfinite(L) ? L + 120.0 : R - 0.25;
        auto phi = [&](double x) { return log_integrand(cd(x, 0.0)).real(); };
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = phi(x1), f2 = phi(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = phi(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = phi(x2);
            }
        }
        c = 0.5 * (lo + hi);
        // Keep at least a quarter unit from the nearest pole.
        if (std::isfinite(L)) c = std::max(c, L + 0.25);
        if (std::isfinite(R)) c = std::min(c, R - 0.25);
    } else {
        // Families overlap: run the line left of all right-family poles and
        // add back the left-family poles it leaves on its right.
        double best = R - 0.5, bestd = -1.0;
        for (int i = 1; i < 100; ++i) {
            double x = R - 0.01 * i;
            double d = pole_distance(x);
            if (d > bestd) { bestd = d; best = x; }
        }
        c = best;
    }
    const double margin = pole_distance(c);
    if (!(margin > 1e-9)) throw DomainError("meijer_g: no pole-free abscissa found");

    // Residues of left-family poles on the wrong side of the line.
    CompensatedSum residue_sum;
    for (std::size_t idx = 0; idx < fs.size(); ++idx) {
        const auto& fl = fs[idx];
        if (!fl.num || fl.es != +1) continue;
        for (int k = 0;; ++k) {
            double pole = -fl.c - k;
            if (pole <= c) break;
            double logv = pole * lz, sign = (k % 2 == 0) ? 1.0 : -1.0;
            logv -= std::lgamma(static_cast<double>(k) + 1.0);
            bool zero = false;
            for (std::size_t o = 0; o < fs.size(); ++o) {
                if (o == idx) continue;
                double arg = fs[o].c + fs[o].es * pole;
                if (nonpositive_integer(arg)) {
                    if (fs[o].num) throw DomainError("meijer_g: double pole in residue correction");
                    zero = true;
                    break;
                }
                SignedLog g = ln_gamma_signed(arg);
                logv += fs[o].num ? g.value : -g.value;
                sign *= g.sign;
            }
            if (!zero) residue_sum.add(sign * std::exp(logv));
            ++res.plan.residues;
        }
    }
    const double residues = static_cast<double>(residue_sum.value());

    const double thr = std::log(1.0 / rel_tol) + 12.0;
    const double T = scan_half_height(
        [&](double u) { return log_integrand(cd(c, u)).real(); }, thr, "meijer_g");

    double h = step_scale * std::min(1.0, kTwoPi * margin / (std::log(1.0 / rel_tol) + 6.0));
    auto f_at = [&](double u) { return std::exp(log_integrand(cd(c, u))); };

    // Conjugate symmetry: integrand(-u) = conj(integrand(u)).
    long N = static_cast<long>(std::ceil(T / h));
    CompensatedSum sum, l1;
    {
        cd f0 = f_at(0.0);
        sum.add(f0.real());
        l1.add(std::abs(f0));
        for (long k = 1; k <= N; ++k) {
            cd f = f_at(k * h);
            sum.add(2.0 * f.real());
            l1.add(2.0 * std::abs(f));
        }
    }
    double I = static_cast<double>(sum.value()) * h / kTwoPi;
    double err = kInf;
    for (int level = 0; level < 14; ++level) {
        h *= 0.5;
        N = static_cast<long>(std::ceil(T / h));
        for (long k = 1; k <= N; k += 2) {
            cd f = f_at(k * h);
            sum.add(2.0 * f.real());
            l1.add(2.0 * std::abs(f));
        }
        double Inew = static_cast<double>(sum.value()) * h / kTwoPi;
        double scale = static_cast<double>(l1.value()) * h / kTwoPi;
        double diff = std::abs(Inew - I);
        I = Inew;
        err = diff + 1e-15 * scale;
        if (diff <= std::max(rel_tol * std::abs(I + residues), 1e-15 * scale)) {
            res.value = I + residues;
            res.error = err;
            res.plan.c_s = c;
            res.plan.half_height_s = T;
            res.plan.step = h;
            res.plan.nodes = 2 * N + 1;
            return res;
        }
    }
    throw ConvergenceError("meijer_g: trapezoid refinement did not converge (last change " +
                           std::to_string(err) + ")");
}

GResult meijer_g_bivariate(const BivariateGParams& p, double rel_tol, double step_scale) {
    validate_counts(p.a1, p.b1, p.m1, p.n1);
    validate_counts(p.a2, p.b2, p.m2, p.n2);
    if (!(p.x > 0.0) || !(p.y > 0.0)) throw DomainError("meijer_g_bivariate: arguments must be positive");

    std::vector<Factor> fs;
    for (double a : p.outer) fs.push_back({a, +1, +1, true});
    append_standard(fs, p.a1, p.b1, p.m1, p.n1, true);
    append_standard(fs, p.a2, p.b2, p.m2, p.n2, false);
    GResult res;

    double Ls = -kInf, Rs = kInf, Lt = -kInf, Rt = kInf, Lc = -kInf;
    std::vector<Factor> fs_s, fs_t, fs_c;
    for (const auto& f : fs) {
        if (f.es != 0 && f.et != 0) {
            if (f.es != +1 || f.et != +1 || !f.num)
                throw DomainError("meijer_g_bivariate: unsupported coupling factor");
            Lc = std::max(Lc, -f.c);
            fs_c.push_back(f);
        } else if (f.es != 0) {
            fs_s.push_back(f);
            if (f.num && f.es == +1) Ls = std::max(Ls, -f.c);
            if (f.num && f.es == -1) Rs = std::min(Rs, f.c);
        } else {
            fs_t.push_back(f);
            if (f.num && f.et == +1) Lt = std::max(Lt, -f.c);
            if (f.num && f.et == -1) Rt = std::min(Rt, f.c);
        }
    }

    const double lx = std::log(p.x), ly = std::log(p.y);
    auto log_s = [&](cd s) {
        cd acc = s * lx;
        for (const auto& f : fs_s) acc += log_factor(f, f.c + static_cast<double>(f.es) * s);
        return acc;
    };
    auto log_t = [&](cd t) {
        cd acc = t * ly;
        for (const auto& f : fs_t) acc += log_factor(f, f.c + static_cast<double>(f.et) * t);
        return acc;
    };
    auto log_c = [&](cd w) {
        cd acc = 0.0;
        for (const auto& f : fs_c) acc += log_factor(f, f.c + w);
        return acc;
    };

    auto lo_hi = [](double L, double R) {
        double lo = std::isfinite(L) ? L : (std::isfinite(R) ? R - 6.0 : -6.0);
        double hi = std::isfinite(R) ? R : lo + 12.0;
        return std::pair<double, double>{lo, hi};
    };
    auto [s_lo, s_hi] = lo_hi(Ls, Rs);
    auto [t_lo, t_hi] = lo_hi(Lt, Rt);
    if (std::isfinite(Lc) && !std::isfinite(Rs) && !std::isfinite(Rt)) {
        s_hi = std::max(s_hi, Lc + 6.0);
        t_hi = std::max(t_hi, Lc + 6.0);
    }
    auto margin_at = [&](double cs, double ct) {
        double m = kInf;
        if (std::isfinite(Ls)) m = std::min(m, cs - Ls);
        if (std::isfinite(Rs)) m = std::min(m, Rs - cs);
        if (std::isfinite(Lt)) m = std::min(m, ct - Lt);
        if (std::isfinite(Rt)) m = std::min(m, Rt - ct);
        if (std::isfinite(Lc)) m = std::min(m, cs + ct - Lc);
        return m;
    };

    constexpr int G = 121;
    double best_margin = -kInf;
    std::vector<std::array<double, 3>> cand;
    for (int i = 0; i < G; ++i) {
        double cs = s_lo + (i + 0.5) / G * (s_hi - s_lo);
        for (int k = 0; k < G; ++k) {
            double ct = t_lo + (k + 0.5) / G * (t_hi - t_lo);
            double m = margin_at(cs, ct);
            best_margin = std::max(best_margin, m);
            cand.push_back({cs, ct, m});
        }
    }
    if (!(best_margin > 1e-3))
        throw DomainError("meijer_g_bivariate: no contour pair separates the pole families");
    // Trade pole clearance (cost) against the size of the integrand on the
    // lines (cancellation): take the widest clearance, capped at 0.5, whose
    // real-axis log-magnitude stays within 12 of the smallest achievable.
    const double floor_margin = std::min(0.02, 0.5 * best_margin);
    std::vector<double> phis(cand.size(), kInf);
    double phi_min = kInf;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const auto& c = cand[i];
        if (c[2] < floor_margin) continue;
        phis[i] = (log_s(cd(c[0], 0)) + log_t(cd(c[1], 0)) + log_c(cd(c[0] + c[1], 0))).real();
        phi_min = std::min(phi_min, phis[i]);
    }
    double cs = 0, ct = 0, margin = -1, bestphi = kInf;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const auto& c = cand[i];
        if (!(phis[i] <= phi_min + 12.0)) continue;
        double m = std::min(c[2], 0.5);
        if (m > margin + 1e-12 || (std::abs(m - margin) <= 1e-12 && phis[i] < bestphi)) {
            margin = m;
            bestphi = phis[i];
            cs = c[0];
            ct = c[1];
        }
    }

    const double thr = std::log(1.0 / rel_tol) + 14.0;
    const double Ts = scan_half_height([&](double u) { return log_s(cd(cs, u)).real(); }, thr,
                                       "meijer_g_bivariate(s)");
    const double Tt = scan_half_height([&](double v) { return log_t(cd(ct, v)).real(); }, thr,
                                       "meijer_g_bivariate(t)");

    auto evaluate = [&](double h, double& l1) {
        long Ns = static_cast<long>(std::ceil(Ts / h)), Nt = static_cast<long>(std::ceil(Tt / h));
        long Nc = Ns + Nt;
        auto fill = [](long N, auto&& fn, std::vector<cd>& out) {
            std::vector<cd> lg(2 * N + 1);
            double mx = -kInf;
            for (long i = -N; i <= N; ++i) {
                lg[i + N] = fn(i);
                mx = std::max(mx, lg[i + N].real());
            }
            out.resize(lg.size());
            for (std::size_t i = 0; i < lg.size(); ++i) out[i] = std::exp(lg[i] - mx);
            return mx;
        };
        std::vector<cd> F, Gt, Ph;
        double scale = fill(Ns, [&](long i) { return log_s(cd(cs, i * h)); }, F);
        scale += fill(Nt, [&](long k) { return log_t(cd(ct, k * h)); }, Gt);
        scale += fill(Nc, [&](long q) { return log_c(cd(cs + ct, q * h)); }, Ph);
        // integrand(-u,-v) = conj(integrand(u,v)): rows u<0 mirror rows u>0.
        long double re = 0.0L, ab = 0.0L;
        for (long i = Ns; i <= 2 * Ns; ++i) {
            const double wrow = (i == Ns) ? 1.0 : 2.0;
            cd inner = 0.0;
            double inner_abs = 0.0;
            const cd* ph = Ph.data() + i;  // index (i - Ns) + (k - Nt) + Nc = i + k
            for (long k = 0; k <= 2 * Nt; ++k) {
                cd g = Gt[k] * ph[k];
                inner += g;
                inner_abs += std::abs(g);
            }
            re += wrow * (F[i] * inner).real();
            ab += wrow * std::abs(F[i]) * inner_abs;
        }
        double w = std::exp(scale) * h * h / (kTwoPi * kTwoPi);
        l1 = static_cast<double>(ab) * w;
        res.plan.nodes = (2 * Ns + 1) * (2 * Nt + 1);
        return static_cast<double>(re) * w;
    };

    double h = step_scale * std::min(0.5, kTwoPi * margin / (std::log(1.0 / rel_tol) + 6.0));
    double l1 = 0.0;
    double I = evaluate(h, l1);
    for (int level = 0; level < 6; ++level) {
        h *= 0.5;
        double Inew = evaluate(h, l1);
        double diff = std::abs(Inew - I);
        I = Inew;
        if (diff <= std::max(rel_tol * std::abs(I), 1e-14 * l1)) {
            res.value = I;
            res.error = diff + 1e-15 * l1;
            res.plan.c_s = cs;
            res.plan.c_t = ct;
            res.plan.half_height_s = Ts;
            res.plan.half_height_t = Tt;
            res.plan.step = h;
            return res;
        }
    }
    throw ConvergenceError("meijer_g_bivariate: trapezoid refinement did not converge");
}

}  // namespace vhts::specfun
