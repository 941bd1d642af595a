#include "orthospec/observable.hpp"

#include <algorithm>
#include <cmath>

#include "orthospec/errors.hpp"

namespace orthospec {

struct SphereFunction::Impl {
    int dim = 0;
    std::function<Complex(const Vec&)> fn;  // closed form, when available

    // Grid backing (d=2: ring of n_lon samples; d=3: n_colat x n_lon).
    bool gridded = false;
    int n_colat = 0, n_lon = 0;
    std::vector<double> ring_cos;  // cos(colatitude) per ring (d=3)
    std::vector<Complex> values;

    // Spectral interpolation data, built eagerly for gridded functions.
    std::vector<Complex> fourier;                 // d=2: c_k, k = -K..K
    std::vector<std::vector<Complex>> harmonics;  // d=3: [l][m+l]
    int kmax = 0, lmax = 0;

    Complex eval(const Vec& u) const;
};

namespace {

Complex eval_harmonic_expansion(const std::vector<std::vector<Complex>>& c, int lmax,
                                const Vec& u) {
    double ct = std::max(-1.0, std::min(1.0, u[2]));
    double phi = std::atan2(u[1], u[0]);
    Complex sum = 0.0;
    std::vector<double> pl;
    for (int m = -lmax; m <= lmax; ++m) {
        int am = std::abs(m);
        normalized_assoc_legendre(lmax, am, ct, pl);
        // Y_{l,-m} = (-1)^m conj(Y_{l,m}) for the Condon-Shortley convention;
        // we synthesize both signs directly from the |m| basis.
        Complex e = std::polar(1.0, m * phi);
        for (int l = am; l <= lmax; ++l) {
            double base = pl[l - am];
            double sign = (m < 0 && (am % 2)) ? -1.0 : 1.0;
            sum += c[l][m + l] * sign * base * e;
        }
    }
    return sum;
}

}  // namespace

Complex SphereFunction::Impl::eval(const Vec& u) const {
    if (fn) return fn(u);
    if (!gridded) return 0.0;
    if (dim == 2) {
        double phi = std::atan2(u[1], u[0]);
        Complex sum = fourier[kmax];  // c_0
        for (int k = 1; k <= kmax; ++k) {
            Complex e = std::polar(1.0, k * phi);
            sum += fourier[kmax + k] * e + fourier[kmax - k] * std::conj(e);
        }
        return sum;
    }
    return eval_harmonic_expansion(harmonics, lmax, u);
}

SphereFunction SphereFunction::zero(int dim) {
    return constant(dim, Complex(0.0, 0.0));
}

SphereFunction SphereFunction::constant(int dim, Complex value) {
    return from_callable(dim, [value](const Vec&) { return value; });
}

SphereFunction SphereFunction::from_callable(int dim, std::function<Complex(const Vec&)> f) {
    if (dim != 2 && dim != 3) throw PreconditionError("SphereFunction: d = 2 or 3 required");
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->fn = std::move(f);
    SphereFunction s;
    s.impl_ = std::move(impl);
    return s;
}

SphereFunction SphereFunction::from_grid(const SphereQuadrature& grid,
                                         std::vector<Complex> values) {
    if (grid.dim != 2 && grid.dim != 3)
        throw PreconditionError("SphereFunction::from_grid: d = 2 or 3 required");
    if (values.size() != grid.size())
        throw PreconditionError("SphereFunction::from_grid: value count mismatch");
    auto impl = std::make_shared<Impl>();
    impl->dim = grid.dim;
    impl->gridded = true;
    impl->n_colat = grid.n_colat;
    impl->n_lon = grid.n_lon;
    impl->values = std::move(values);

    if (grid.dim == 2) {
        const int m = grid.n_lon;
        impl->kmax = std::min(m / 2 - 1, 256);
        impl->fourier.assign(2 * impl->kmax + 1, Complex(0.0));
        for (int k = -impl->kmax; k <= impl->kmax; ++k) {
            Complex c = 0.0;
            for (int j = 0; j < m; ++j) {
                double phi = 2.0 * M_PI * j / m;
                c += impl->values[j] * std::polar(1.0, -k * phi);
            }
            impl->fourier[impl->kmax + k] = c / static_cast<double>(m);
        }
    } else {
        const int nc = grid.n_colat, nl = grid.n_lon;
        impl->lmax = std::min({nc - 1, nl / 2 - 1, 48});
        impl->ring_cos.resize(nc);
        for (int i = 0; i < nc; ++i) impl->ring_cos[i] = grid.nodes[i * nl][2];
        // Analysis: c_lm = sum_i w_i f_i conj(Y_lm(node_i)).
        impl->harmonics.assign(impl->lmax + 1, {});
        for (int l = 0; l <= impl->lmax; ++l)
            impl->harmonics[l].assign(2 * l + 1, Complex(0.0));
        std::vector<double> pl;
        for (int i = 0; i < nc; ++i) {
            double ct = impl->ring_cos[i];
            // Longitude DFT per ring reduces the analysis to one pass per m.
            for (int m = -impl->lmax; m <= impl->lmax; ++m) {
                Complex ring = 0.0;
                for (int j = 0; j < nl; ++j) {
                    double phi = 2.0 * M_PI * j / nl;
                    ring += impl->values[i * nl + j] * std::polar(1.0, -m * phi);
                }
                int am = std::abs(m);
                normalized_assoc_legendre(impl->lmax, am, ct, pl);
                double wring = grid.weights[i * nl];  // equal within a ring
                for (int l = am; l <= impl->lmax; ++l) {
                    double sign = (m < 0 && (am % 2)) ? -1.0 : 1.0;
                    impl->harmonics[l][m + l] += wring * ring * sign * pl[l - am];
                }
            }
        }
    }
    SphereFunction s;
    s.impl_ = std::move(impl);
    return s;
}

int SphereFunction::dim() const {
    if (!impl_) throw PreconditionError("SphereFunction: empty");
    return impl_->dim;
}

Complex SphereFunction::operator()(const Vec& u) const {
    if (!impl_) throw PreconditionError("SphereFunction: empty");
    return impl_->eval(u);
}

std::vector<Complex> SphereFunction::circle_coefficients(int kmax) const {
    if (dim() != 2) throw PreconditionError("circle_coefficients: d = 2 only");
    if (impl_->gridded && !impl_->fn) {
        std::vector<Complex> out(2 * kmax + 1, Complex(0.0));
        for (int k = -kmax; k <= kmax; ++k)
            if (std::abs(k) <= impl_->kmax) out[kmax + k] = impl_->fourier[impl_->kmax + k];
        return out;
    }
    const int m = std::max(4 * kmax + 8, 512);
    std::vector<Complex> out(2 * kmax + 1, Complex(0.0));
    std::vector<Complex> samples(m);
    for (int j = 0; j < m; ++j) {
        double phi = 2.0 * M_PI * j / m;
        samples[j] = impl_->fn(Vec{std::cos(phi), std::sin(phi)});
    }
    for (int k = -kmax; k <= kmax; ++k) {
        Complex c = 0.0;
        for (int j = 0; j < m; ++j) c += samples[j] * std::polar(1.0, -k * (2.0 * M_PI * j / m));
        out[kmax + k] = c / static_cast<double>(m);
    }
    return out;
}

std::vector<std::vector<Complex>> SphereFunction::sphere_coefficients(int lmax) const {
    if (dim() != 3) throw PreconditionError("sphere_coefficients: d = 3 only");
    if (impl_->gridded && !impl_->fn) {
        std::vector<std::vector<Complex>> out(lmax + 1);
        for (int l = 0; l <= lmax; ++l) {
            out[l].assign(2 * l + 1, Complex(0.0));
            if (l <= impl_->lmax) out[l] = impl_->harmonics[l];
        }
        return out;
    }
    // Sample the closed form on a grid sized for the requested band limit.
    int nc = std::max(2 * lmax + 2, 48);
    int nl = std::max(2 * lmax + 2, 96);
    SphereQuadrature grid = SphereQuadrature::sphere(nc, nl);
    std::vector<Complex> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = impl_->fn(grid.nodes[i]);
    SphereFunction g = from_grid(grid, std::move(vals));
    std::vector<std::vector<Complex>> out(lmax + 1);
    for (int l = 0; l <= lmax; ++l) {
        out[l].assign(2 * l + 1, Complex(0.0));
        if (l <= g.impl_->lmax) out[l] = g.impl_->harmonics[l];
    }
    return out;
}

double SphereFunction::sobolev_norm(double m_order) const {
    if (dim() == 2) {
        const int kmax = 128;
        std::vector<Complex> c = circle_coefficients(kmax);
        double sum = 0;
        for (int k = -kmax; k <= kmax; ++k) {
            double w = std::pow(1.0 + static_cast<double>(k) * k, m_order);
            sum += w * std::norm(c[kmax + k]);
        }
        return std::sqrt(2.0 * M_PI * sum);
    }
    const int lmax = 40;
    auto c = sphere_coefficients(lmax);
    double sum = 0;
    for (int l = 0; l <= lmax; ++l) {
        double w = std::pow(1.0 + static_cast<double>(l) * (l + 1.0), m_order);
        for (int m = -l; m <= l; ++m) sum += w * std::norm(c[l][m + l]);
    }
    return std::sqrt(sum);
}

// ---------------------------------------------------------------------------

Observable Observable::make(int dim, std::vector<Mode> modes) {
    Observable obs;
    obs.dim = dim;
    obs.modes = std::move(modes);
    std::sort(obs.modes.begin(), obs.modes.end(),
              [](const Mode& a, const Mode& b) { return a.xi < b.xi; });
    for (std::size_t i = 1; i < obs.modes.size(); ++i)
        if (obs.modes[i].xi == obs.modes[i - 1].xi)
            throw PreconditionError("Observable: duplicate mode");
    obs.grid = std::make_shared<SphereQuadrature>(SphereQuadrature::standard(dim));
    return obs;
}

const SphereFunction* Observable::find_mode(const LatticeVec& xi) const {
    for (const Mode& m : modes)
        if (m.xi == xi) return &m.coeff;
    return nullptr;
}

double Observable::l2_norm() const {
    double sum = 0;
    for (const Mode& m : modes)
        for (std::size_t i = 0; i < grid->size(); ++i)
            sum += grid->weights[i] * std::norm(m.coeff(grid->nodes[i]));
    return std::sqrt(sum);
}

bool Observable::is_real(double tol) const {
    for (const Mode& m : modes) {
        LatticeVec neg(m.xi.d);
        for (int i = 0; i < m.xi.d; ++i) neg[i] = -m.xi[i];
        const SphereFunction* other = find_mode(neg);
        if (!other) return false;
        for (std::size_t i = 0; i < grid->size(); i += 7) {
            Complex a = m.coeff(grid->nodes[i]);
            Complex b = (*other)(grid->nodes[i]);
            if (std::abs(a - std::conj(b)) > tol) return false;
        }
    }
    return true;
}

SphereFunction sphere_function_from_json(const nlohmann::json& j, int dim) {
    if (!j.is_object()) throw ConfigError("coeff", "expected an object");
    std::string type = j.value("type", "");
    auto get_complex = [&](const char* re_key, const char* im_key, double def_re) {
        double re = j.value(re_key, def_re);
        double im = j.value(im_key, 0.0);
        return Complex(re, im);
    };
    if (type == "constant") {
        return SphereFunction::constant(dim, get_complex("value", "value_im", 1.0));
    }
    if (type == "harmonic") {
        if (dim == 2) {
            int k = j.value("k", 1);
            Complex amp = get_complex("amplitude", "amplitude_im", 1.0);
            return SphereFunction::from_callable(2, [k, amp](const Vec& u) {
                double phi = std::atan2(u[1], u[0]);
                return amp * std::polar(1.0, k * phi);
            });
        }
        int l = j.value("l", 1);
        int m = j.value("m", 0);
        if (std::abs(m) > l) throw ConfigError("coeff.m", "|m| must not exceed l");
        Complex amp = get_complex("amplitude", "amplitude_im", 1.0);
        return SphereFunction::from_callable(3, [l, m, amp](const Vec& u) {
            std::vector<double> pl;
            int am = std::abs(m);
            normalized_assoc_legendre(l, am, std::max(-1.0, std::min(1.0, u[2])), pl);
            double base = pl[l - am];
            double sign = (m < 0 && (am % 2)) ? -1.0 : 1.0;
            double phi = std::atan2(u[1], u[0]);
            return amp * sign * base * std::polar(1.0, m * phi);
        });
    }
    if (type == "bump") {
        // Compactly supported C^inf bump around an axis direction.
        double width = j.value("width", 0.5);
        double amp = j.value("amplitude", 1.0);
        if (width <= 0 || width > M_PI) throw ConfigError("coeff.width", "need 0 < width <= pi");
        Vec axis;
        if (j.contains("axis")) {
            auto ax = j.at("axis").get<std::vector<double>>();
            if (static_cast<int>(ax.size()) != dim)
                throw ConfigError("coeff.axis", "length must equal the dimension");
            axis = normalized(Vec::from(ax));
        } else {
            axis = Vec(dim);
            axis[0] = 1.0;
        }
        return SphereFunction::from_callable(dim, [axis, width, amp](const Vec& u) {
            double c = std::max(-1.0, std::min(1.0, dot(u, axis)));
            double ang = std::acos(c);
            double x = ang / width;
            if (x >= 1.0) return Complex(0.0);
            return Complex(amp * std::exp(1.0 - 1.0 / (1.0 - x * x)));
        });
    }
    throw ConfigError("coeff.type", "unknown type '" + type + "'");
}

Observable Observable::from_json(const nlohmann::json& j, int dim) {
    if (!j.is_array()) throw ConfigError("observable", "expected an array of modes");
    std::vector<Mode> modes;
    for (const auto& mj : j) {
        for (auto it = mj.begin(); it != mj.end(); ++it)
            if (it.key() != "xi" && it.key() != "coeff")
                throw ConfigError("observable." + it.key(), "unknown key");
        Mode m;
        auto xi = mj.at("xi").get<std::vector<std::int64_t>>();
        if (static_cast<int>(xi.size()) != dim)
            throw ConfigError("observable.xi", "length must equal the dimension");
        m.xi = LatticeVec(dim);
        for (int i = 0; i < dim; ++i) m.xi[i] = xi[i];
        m.coeff = sphere_function_from_json(mj.at("coeff"), dim);
        modes.push_back(std::move(m));
    }
    return make(dim, std::move(modes));
}

Projectors projectors(const Observable& phi) {
    Projectors p;
    p.p0 = SphereFunction::zero(phi.dim);
    for (const Observable::Mode& m : phi.modes) {
        if (m.xi.is_zero()) {
            p.p0 = m.coeff;
            continue;
        }
        Vec dir = normalized(m.xi.to_vec());
        Projectors::PoleValue pv;
        pv.xi = m.xi;
        pv.plus = m.coeff(dir);
        pv.minus = m.coeff(-dir);
        p.pole_values.push_back(pv);
    }
    return p;
}

double anisotropic_norm(const Observable& u, double m_order, double n_order) {
    double sum = 0;
    for (const Observable::Mode& m : u.modes) {
        double xi2 = norm2(m.xi.to_vec());
        double w = std::pow(1.0 + xi2, n_order);
        double hm = m.coeff.sobolev_norm(m_order);
        sum += w * hm * hm;
    }
    return std::sqrt(sum);
}

}  // namespace orthospec
