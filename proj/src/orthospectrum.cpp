#include "orthospec/orthospectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "orthospec/errors.hpp"
#include "orthospec/quadrature.hpp"

namespace orthospec {

bool OneForm::beta_is_integer(double tol) const {
    if (beta.d == 0) return true;
    for (int i = 0; i < beta.d; ++i)
        if (std::abs(beta[i] - std::round(beta[i])) > tol) return false;
    return true;
}

double OneForm::f(const Vec& x) const {
    double s = 0;
    for (const FourierTerm& t : f_terms) {
        double kx = 0;
        for (int i = 0; i < x.d; ++i) kx += static_cast<double>(t.k[i]) * x[i];
        s += t.cos_coeff * std::cos(kx) + t.sin_coeff * std::sin(kx);
    }
    return s;
}

OneForm OneForm::from_json(const nlohmann::json& j, int dim) {
    OneForm form;
    if (j.is_null()) return form;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "beta" && it.key() != "f_terms")
            throw ConfigError("one_form." + it.key(), "unknown key");
    }
    if (j.contains("beta")) {
        auto b = j.at("beta").get<std::vector<double>>();
        if (static_cast<int>(b.size()) != dim)
            throw ConfigError("one_form.beta", "length must equal the dimension");
        form.beta = Vec::from(b);
    }
    if (j.contains("f_terms")) {
        for (const auto& tj : j.at("f_terms")) {
            FourierTerm t;
            auto k = tj.at("k").get<std::vector<std::int64_t>>();
            if (static_cast<int>(k.size()) != dim)
                throw ConfigError("one_form.f_terms.k", "length must equal the dimension");
            t.k = LatticeVec(dim);
            for (int i = 0; i < dim; ++i) t.k[i] = k[i];
            if (tj.contains("cos")) t.cos_coeff = tj.at("cos").get<double>();
            if (tj.contains("sin")) t.sin_coeff = tj.at("sin").get<double>();
            form.f_terms.push_back(t);
        }
    }
    return form;
}

nlohmann::json OneForm::to_json() const {
    nlohmann::json j;
    if (beta.d > 0) j["beta"] = beta.to_vector();
    if (!f_terms.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const FourierTerm& t : f_terms) {
            nlohmann::json tj;
            std::vector<std::int64_t> k(t.k.c.begin(), t.k.c.begin() + t.k.d);
            tj["k"] = k;
            tj["cos"] = t.cos_coeff;
            tj["sin"] = t.sin_coeff;
            arr.push_back(tj);
        }
        j["f_terms"] = arr;
    }
    return j;
}

namespace {

/// Objective F(u) = 2 pi <xi, u> - h1(u) - h2(-u) and its derivatives.
struct Objective {
    const ConvexBody& k1;
    const ConvexBody& k2;
    Vec target;  // 2 pi xi

    double value(const Vec& u) const { return dot(target, u) - k1.support(u) - k2.support(-u); }
    Vec gradient(const Vec& u) const {
        // d/du [h2(-u)] = -grad h2(-u), so grad F = target - grad h1(u) + grad h2(-u).
        return target - k1.support_gradient(u) + k2.support_gradient(-u);
    }
    /// Ambient Hessian restricted to the tangent basis (support parts only,
    /// the linear part has zero Hessian): -W1(u) - W2(-u).
    SmallMat hessian_tangential(const Vec& u, const std::vector<Vec>& basis) const {
        SmallMat w1 = k1.curvature(u, basis);
        SmallMat w2 = k2.curvature(-u, basis);
        SmallMat h(w1.n);
        for (int i = 0; i < w1.n * w1.n; ++i) h.m[i] = -w1.m[i] - w2.m[i];
        return h;
    }
};

std::optional<Vec> newton_on_sphere(const Objective& obj, Vec u, const SolverOptions& opt) {
    const int d = u.d;
    for (int iter = 0; iter < opt.max_newton; ++iter) {
        std::vector<Vec> basis = tangent_basis(u);
        Vec g = obj.gradient(u);
        double radial = dot(g, u);
        std::vector<double> gt(d - 1);
        double gnorm = 0;
        for (int i = 0; i < d - 1; ++i) {
            gt[i] = dot(g, basis[i]);
            gnorm += gt[i] * gt[i];
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm < opt.newton_tol) return u;
        // Sphere Hessian of F at u: tangential part minus <grad F, u> I.
        SmallMat h = obj.hessian_tangential(u, basis);
        for (int i = 0; i < d - 1; ++i) h.at(i, i) -= radial;
        // Solve h s = -g (1x1 or 2x2).
        std::array<double, 2> s{};
        if (d == 2) {
            if (std::abs(h.at(0, 0)) < 1e-300) return std::nullopt;
            s[0] = -gt[0] / h.at(0, 0);
        } else {
            double det = h.at(0, 0) * h.at(1, 1) - h.at(0, 1) * h.at(1, 0);
            if (std::abs(det) < 1e-300) return std::nullopt;
            s[0] = (-gt[0] * h.at(1, 1) + gt[1] * h.at(0, 1)) / det;
            s[1] = (-gt[1] * h.at(0, 0) + gt[0] * h.at(1, 0)) / det;
        }
        double step2 = s[0] * s[0] + (d == 3 ? s[1] * s[1] : 0.0);
        if (step2 > 1.0) {
            // Limit the retraction step; Newton far from the basin.
            double sc = 1.0 / std::sqrt(step2);
            s[0] *= sc;
            if (d == 3) s[1] *= sc;
        }
        Vec next = u + s[0] * basis[0];
        if (d == 3) next += s[1] * basis[1];
        next = normalized(next);
        u = next;
    }
    // Accept if the gradient is already small enough for the KKT check.
    std::vector<Vec> basis = tangent_basis(u);
    Vec g = obj.gradient(u);
    double gnorm = 0;
    for (int i = 0; i < d - 1; ++i) {
        double gi = dot(g, basis[i]);
        gnorm += gi * gi;
    }
    if (std::sqrt(gnorm) < 1e-9) return u;
    return std::nullopt;
}

/// Projected-gradient ascent with backtracking; coarse but globally safe.
Vec projected_gradient(const Objective& obj, Vec u, int iters) {
    double step = 0.5;
    double f = obj.value(u);
    for (int it = 0; it < iters; ++it) {
        Vec g = obj.gradient(u);
        Vec gt = g - dot(g, u) * u;
        double gn = norm(gt);
        if (gn < 1e-14) break;
        bool advanced = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec cand = normalized(u + (step / gn) * gt);
            double fc = obj.value(cand);
            if (fc > f) {
                u = cand;
                f = fc;
                step *= 1.3;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if (!advanced) break;
    }
    return u;
}

/// Coarse global scan for a starting direction.
Vec coarse_argmax(const Objective& obj, int d, int samples) {
    Vec best(d);
    double fbest = -1e300;
    if (d == 2) {
        for (int i = 0; i < samples; ++i) {
            double phi = 2.0 * M_PI * i / samples;
            Vec u{std::cos(phi), std::sin(phi)};
            double f = obj.value(u);
            if (f > fbest) {
                fbest = f;
                best = u;
            }
        }
    } else if (d == 3) {
        int n = std::max(8, samples / 4);
        for (int i = 0; i < n; ++i) {
            double c = -1.0 + 2.0 * (i + 0.5) / n;
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int jj = 0; jj < 2 * n; ++jj) {
                double phi = 2.0 * M_PI * jj / (2 * n);
                Vec u{s * std::cos(phi), s * std::sin(phi), c};
                double f = obj.value(u);
                if (f > fbest) {
                    fbest = f;
                    best = u;
                }
            }
        }
    } else {
        throw PreconditionError("common_perpendicular: coarse scan supports d <= 3");
    }
    return best;
}

}  // namespace

double default_t0(const ConvexBody& k1, const ConvexBody& k2) {
    return k1.diameter() + k2.diameter() + 1.0;
}

namespace {

/// Closed-form perpendicular when both bodies are single balls or points.
std::optional<Orthogeodesic> ball_pair_perpendicular(const ConvexBody& k1, const ConvexBody& k2,
                                                     const LatticeVec& xi) {
    const int d = k1.dim();
    Vec e0(d);
    e0[0] = 1.0;
    Vec c1 = k1.support_gradient(e0);  // center (gradient of the linear part)
    Vec c2 = k2.support_gradient(e0);
    double r1 = 0.5 * k1.diameter();
    double r2 = 0.5 * k2.diameter();
    if (!k1.is_point()) c1 -= r1 * e0;
    if (!k2.is_point()) c2 -= r2 * e0;
    Vec axis = 2.0 * M_PI * xi.to_vec() + c2 - c1;
    double gap = norm(axis) - r1 - r2;
    if (gap <= 0 || norm(axis) == 0) return std::nullopt;
    Orthogeodesic g;
    g.xi = xi;
    g.length = gap;
    g.direction = normalized(axis);
    g.foot1 = c1 + r1 * g.direction;
    g.foot2 = 2.0 * M_PI * xi.to_vec() + c2 - r2 * g.direction;
    return g;
}

bool is_simple_ball_or_point(const ConvexBody& b) {
    return b.kind() == "point" || b.kind() == "ball";
}

}  // namespace

std::optional<Orthogeodesic> common_perpendicular(const ConvexBody& k1, const ConvexBody& k2,
                                                  const LatticeVec& xi, const SolverOptions& opt) {
    if (k1.dim() != k2.dim()) throw PreconditionError("common_perpendicular: dimension mismatch");
    const int d = k1.dim();
    Objective obj{k1, k2, 2.0 * M_PI * xi.to_vec()};

    Vec u;
    if (is_simple_ball_or_point(k1) && is_simple_ball_or_point(k2)) {
        return ball_pair_perpendicular(k1, k2, xi);
    } else {
        // Every spherical critical point of F sits within O(R/|2 pi xi|) of
        // +-xi/|xi|, R bounding the support gradients; beyond the trust radius
        // the Newton basin around +xi/|xi| contains the initializer.
        double trust = opt.trust_radius > 0
                           ? opt.trust_radius
                           : 4.0 * (k1.max_support() + k2.max_support() + 1.0);
        bool global_search = norm(obj.target) <= trust;
        std::optional<Vec> res;
        if (!xi.is_zero() && !global_search) {
            res = newton_on_sphere(obj, normalized(xi.to_vec()), opt);
        }
        if (!res) {
            Vec start = coarse_argmax(obj, d, opt.coarse_samples);
            start = projected_gradient(obj, start, 200);
            res = newton_on_sphere(obj, start, opt);
            // Reject only when Newton left the maximizer's basin altogether.
            if (res && obj.value(start) > obj.value(*res) + 1e-10 * (1.0 + std::abs(obj.value(start))))
                res = std::nullopt;
        }
        if (!res) {
            std::ostringstream msg;
            msg << "common_perpendicular: solver failed to converge for xi = (";
            for (int i = 0; i < d; ++i) msg << (i ? "," : "") << xi[i];
            msg << ")";
            throw NumericError(msg.str());
        }
        u = *res;
    }

    double len = obj.value(u);
    if (len <= 0) return std::nullopt;

    Orthogeodesic g;
    g.xi = xi;
    g.length = len;
    g.direction = u;
    g.foot1 = k1.support_gradient(u);
    g.foot2 = obj.target + k2.support_gradient(-u);
    Vec res = g.foot2 - g.foot1 - len * u;
    if (norm(res) > opt.kkt_tol) {
        std::ostringstream msg;
        msg << "common_perpendicular: KKT residual " << norm(res) << " for xi = (";
        for (int i = 0; i < d; ++i) msg << (i ? "," : "") << xi[i];
        msg << ")";
        throw NumericError(msg.str());
    }
    return g;
}

namespace {

std::complex<double> holonomy(const Orthogeodesic& g, const OneForm& form) {
    if (form.empty()) return {1.0, 0.0};
    double phase = 0;
    if (form.beta.d > 0) phase += dot(form.beta, g.displacement());
    phase += form.f(g.foot2) - form.f(g.foot1);
    return std::polar(1.0, phase);
}

LengthSpectrum enumerate_spectrum(const ConvexBody& k1, const ConvexBody& k2, double t_min,
                                  double T, const OneForm& form, const SolverOptions& opt,
                                  bool parallel) {
    if (k1.dim() != k2.dim()) throw PreconditionError("length_spectrum: dimension mismatch");
    const int d = k1.dim();
    LengthSpectrum spec;
    spec.T0 = t_min;
    spec.T = T;
    spec.one_form = form;

    double pad = k1.max_support() + k2.max_support();
    double radius = (T + pad) / (2.0 * M_PI);
    std::array<std::int64_t, kMaxDim> bound{};
    for (int i = 0; i < d; ++i) bound[i] = static_cast<std::int64_t>(std::ceil(radius)) + 1;
    std::vector<LatticeVec> candidates = lattice_box(bound, d);

    SolverOptions solver_opt = opt;
    if (solver_opt.trust_radius <= 0) solver_opt.trust_radius = 4.0 * (pad + 1.0);

    const long long n = static_cast<long long>(candidates.size());
    std::vector<std::optional<Orthogeodesic>> results(candidates.size());
    std::vector<std::string> failures(candidates.size());

    auto solve_one = [&](long long i) {
        try {
            auto geo = common_perpendicular(k1, k2, candidates[static_cast<std::size_t>(i)], solver_opt);
            if (geo && geo->length > t_min && geo->length <= T) {
                geo->holonomy_phase = holonomy(*geo, form);
                results[static_cast<std::size_t>(i)] = std::move(geo);
            }
        } catch (const Error& e) {
            failures[static_cast<std::size_t>(i)] = e.what();
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i) solve_one(i);
    } else {
        for (long long i = 0; i < n; ++i) solve_one(i);
    }

    std::string failed;
    for (const std::string& f : failures)
        if (!f.empty()) failed += (failed.empty() ? "" : "; ") + f;
    if (!failed.empty()) throw NumericError("length_spectrum: " + failed);

    for (auto& r : results)
        if (r) spec.records.push_back(std::move(*r));
    std::sort(spec.records.begin(), spec.records.end(),
              [](const Orthogeodesic& a, const Orthogeodesic& b) {
                  if (a.length != b.length) return a.length < b.length;
                  return a.xi < b.xi;
              });
    return spec;
}

}  // namespace

LengthSpectrum length_spectrum(const ConvexBody& k1, const ConvexBody& k2, double T,
                               const OneForm& beta, const SolverOptions& opt) {
    double t0 = default_t0(k1, k2);
    if (T <= t0) throw PreconditionError("length_spectrum: T must exceed T0 = diam+diam+1");
    return enumerate_spectrum(k1, k2, t0, T, beta, opt, true);
}

LengthSpectrum length_spectrum_range(const ConvexBody& k1, const ConvexBody& k2, double t_min,
                                     double T, const OneForm& beta, const SolverOptions& opt) {
    if (T <= t_min) throw PreconditionError("length_spectrum_range: T > t_min required");
    return enumerate_spectrum(k1, k2, t_min, T, beta, opt, true);
}

LengthSpectrum length_spectrum_serial(const ConvexBody& k1, const ConvexBody& k2, double T,
                                      const OneForm& beta, const SolverOptions& opt) {
    double t0 = default_t0(k1, k2);
    if (T <= t0) throw PreconditionError("length_spectrum: T must exceed T0 = diam+diam+1");
    return enumerate_spectrum(k1, k2, t0, T, beta, opt, false);
}

long long counting_function(const LengthSpectrum& spec, double T) {
    if (T > spec.T) throw PreconditionError("counting_function: T exceeds the spectrum cutoff");
    long long n = 0;
    for (const Orthogeodesic& g : spec.records)
        if (g.length <= T) ++n;
    return n;
}

std::string spectrum_csv(const LengthSpectrum& spec) {
    std::ostringstream os;
    const int d = spec.records.empty() ? 0 : spec.records.front().direction.d;
    for (int i = 0; i < d; ++i) os << "xi_" << i << ",";
    os << "length";
    for (int i = 0; i < d; ++i) os << ",u_" << i;
    for (int i = 0; i < d; ++i) os << ",foot1_" << i;
    for (int i = 0; i < d; ++i) os << ",foot2_" << i;
    os << ",phase_re,phase_im\n";
    char buf[32];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (const Orthogeodesic& g : spec.records) {
        for (int i = 0; i < d; ++i) os << g.xi[i] << ",";
        os << num(g.length);
        for (int i = 0; i < d; ++i) os << "," << num(g.direction[i]);
        for (int i = 0; i < d; ++i) os << "," << num(g.foot1[i]);
        for (int i = 0; i < d; ++i) os << "," << num(g.foot2[i]);
        os << "," << num(g.holonomy_phase.real()) << "," << num(g.holonomy_phase.imag()) << "\n";
    }
    return os.str();
}

nlohmann::json spectrum_metadata(const ConvexBody& k1, const ConvexBody& k2,
                                 const LengthSpectrum& spec) {
    nlohmann::json j;
    j["bodies"] = {k1.to_json(), k2.to_json()};
    j["T0"] = spec.T0;
    j["T"] = spec.T;
    j["orientation"] = spec.orientation == Orientation::K1toK2 ? "K1toK2" : "K2toK1";
    j["one_form"] = spec.one_form.to_json();
    j["count"] = spec.records.size();
    return j;
}

}  // namespace orthospec
