#include "orthospec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "orthospec/errors.hpp"
#include "orthospec/steiner.hpp"

namespace orthospec {

Command command_from_string(const std::string& name) {
    if (name == "spectrum") return Command::Spectrum;
    if (name == "count") return Command::Count;
    if (name == "zeta") return Command::Zeta;
    if (name == "residues") return Command::Residues;
    if (name == "scan") return Command::Scan;
    if (name == "guinand") return Command::Guinand;
    if (name == "correlation") return Command::Correlation;
    if (name == "laplace") return Command::Laplace;
    if (name == "mellin") return Command::Mellin;
    throw ConfigError("command", "unknown command '" + name + "'");
}

std::string command_to_string(Command c) {
    switch (c) {
        case Command::Spectrum: return "spectrum";
        case Command::Count: return "count";
        case Command::Zeta: return "zeta";
        case Command::Residues: return "residues";
        case Command::Scan: return "scan";
        case Command::Guinand: return "guinand";
        case Command::Correlation: return "correlation";
        case Command::Laplace: return "laplace";
        case Command::Mellin: return "mellin";
    }
    return "?";
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "command",   "dimension",  "bodies",     "observables", "one_form", "T",
    "t_values",  "s_values",   "zeta_method", "t_max",      "tau_grid", "scales",
    "sigma",     "n_atoms",    "threads",    "out",         "tolerances"};

void check_top_level_keys(const nlohmann::json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) == kKnownKeys.end())
            throw ConfigError(it.key(), "unknown key");
    }
}

bool needs_bodies(Command c) {
    switch (c) {
        case Command::Spectrum:
        case Command::Count:
        case Command::Zeta:
        case Command::Residues:
        case Command::Scan:
        case Command::Guinand:
            return true;
        default:
            return false;
    }
}

std::vector<double> parse_grid_or_list(const nlohmann::json& j, const std::string& field) {
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "min" && it.key() != "max" && it.key() != "count" && it.key() != "step")
                throw ConfigError(field + "." + it.key(), "unknown key");
        double lo = j.at("min").get<double>();
        double hi = j.at("max").get<double>();
        std::vector<double> out;
        if (j.contains("step")) {
            double step = j.at("step").get<double>();
            if (step <= 0) throw ConfigError(field + ".step", "must be positive");
            for (double x = lo; x <= hi + 1e-12 * std::abs(hi); x += step) out.push_back(x);
        } else {
            int count = j.at("count").get<int>();
            if (count < 2) throw ConfigError(field + ".count", "need at least 2");
            for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
        }
        return out;
    }
    throw ConfigError(field, "expected an array or {min,max,count|step}");
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigError("config", "expected a JSON object");
    check_top_level_keys(config);
    Scenario sc;
    if (!config.contains("command")) throw ConfigError("command", "missing");
    sc.command = command_from_string(config.at("command").get<std::string>());
    if (!config.contains("dimension")) throw ConfigError("dimension", "missing");
    sc.dimension = config.at("dimension").get<int>();
    if (sc.dimension < 2 || sc.dimension > kMaxDim)
        throw ConfigError("dimension", "out of supported range");

    if (needs_bodies(sc.command)) {
        if (!config.contains("bodies")) throw ConfigError("bodies", "missing");
        const auto& bj = config.at("bodies");
        if (!bj.is_array() || bj.size() != 2)
            throw ConfigError("bodies", "exactly two bodies required");
        for (const auto& b : bj) {
            ConvexBody body = ConvexBody::from_json(b);
            if (body.dim() != sc.dimension)
                throw ConfigError("bodies", "body dimension does not match 'dimension'");
            sc.bodies.push_back(std::move(body));
        }
        if (sc.dimension > 3) {
            for (const ConvexBody& b : sc.bodies)
                if (!b.is_point_or_ball())
                    throw ConfigError("bodies", "d >= 4 supports points and balls only");
        } else if (sc.dimension == 3) {
            for (const ConvexBody& b : sc.bodies)
                if (b.kind() == "support_series_2d")
                    throw ConfigError("bodies", "support_series_2d is a d = 2 body");
        }
    }
    bool needs_obs = sc.command == Command::Correlation || sc.command == Command::Laplace ||
                     sc.command == Command::Mellin;
    if (needs_obs) {
        if (sc.dimension > 3)
            throw ConfigError("dimension", "correlation commands support d = 2, 3");
        if (!config.contains("observables")) throw ConfigError("observables", "missing");
        const auto& oj = config.at("observables");
        if (!oj.is_array() || oj.size() != 2)
            throw ConfigError("observables", "exactly two observables required");
        for (const auto& o : oj) sc.observables.push_back(Observable::from_json(o, sc.dimension));
    }
    if (config.contains("one_form"))
        sc.one_form = OneForm::from_json(config.at("one_form"), sc.dimension);

    if (config.contains("T")) sc.T = config.at("T").get<double>();
    if (config.contains("t_values"))
        sc.t_values = parse_grid_or_list(config.at("t_values"), "t_values");
    if (config.contains("s_values")) {
        for (const auto& sv : config.at("s_values")) {
            if (sv.is_number()) {
                sc.s_values.emplace_back(sv.get<double>(), 0.0);
            } else if (sv.is_array() && sv.size() == 2) {
                sc.s_values.emplace_back(sv[0].get<double>(), sv[1].get<double>());
            } else {
                throw ConfigError("s_values", "entries must be numbers or [re, im] pairs");
            }
        }
    }
    sc.zeta_method = config.value("zeta_method", std::string("continued"));
    if (sc.zeta_method != "continued" && sc.zeta_method != "direct")
        throw ConfigError("zeta_method", "must be 'continued' or 'direct'");
    sc.t_max = config.value("t_max", 0.0);
    if (config.contains("tau_grid"))
        sc.tau_grid = parse_grid_or_list(config.at("tau_grid"), "tau_grid");
    if (config.contains("scales")) sc.scales = parse_grid_or_list(config.at("scales"), "scales");
    sc.sigma = config.value("sigma", 0.0);
    sc.n_atoms = config.value("n_atoms", 20);
    sc.threads = config.value("threads", 1);
    if (sc.threads < 1) throw ConfigError("threads", "must be >= 1");
    sc.out_dir = config.value("out", std::string("."));

    if (config.contains("tolerances")) {
        const auto& tj = config.at("tolerances");
        for (auto it = tj.begin(); it != tj.end(); ++it) {
            const std::string& k = it.key();
            if (k == "kkt_tol") sc.solver.kkt_tol = it.value().get<double>();
            else if (k == "newton_tol") sc.solver.newton_tol = it.value().get<double>();
            else if (k == "zeta_t1") sc.zeta_options.t1 = it.value().get<double>();
            else if (k == "zeta_t3") sc.zeta_options.t3 = it.value().get<double>();
            else if (k == "t_split") sc.transform_options.t_split = it.value().get<double>();
            else if (k == "chi_cutoff") sc.transform_options.chi_cutoff = it.value().get<double>();
            else if (k == "probe") sc.transform_options.probe = it.value().get<bool>();
            else if (k == "flag_threshold") sc.scan_options.flag_threshold = it.value().get<double>();
            else if (k == "residual_threshold")
                sc.scan_options.residual_threshold = it.value().get<double>();
            else throw ConfigError("tolerances." + k, "unknown key");
        }
    }

    // Per-command requirements.
    switch (sc.command) {
        case Command::Spectrum:
            if (sc.T <= 0) throw ConfigError("T", "required and positive for 'spectrum'");
            break;
        case Command::Count:
            if (sc.t_values.empty()) throw ConfigError("t_values", "required for 'count'");
            break;
        case Command::Zeta:
            if (sc.s_values.empty()) throw ConfigError("s_values", "required for 'zeta'");
            if (sc.zeta_method == "direct" && sc.t_max <= 0)
                throw ConfigError("t_max", "required for direct zeta summation");
            break;
        case Command::Residues:
            break;
        case Command::Scan:
            if (sc.T <= 0) throw ConfigError("T", "required and positive for 'scan'");
            if (sc.tau_grid.empty()) throw ConfigError("tau_grid", "required for 'scan'");
            if (sc.scales.size() < 4) throw ConfigError("scales", "at least 4 scales required");
            break;
        case Command::Guinand:
            if (sc.T <= 0) throw ConfigError("T", "required and positive for 'guinand'");
            if (sc.one_form.beta.d != sc.dimension)
                throw ConfigError("one_form.beta", "required for 'guinand'");
            if (sc.one_form.beta_is_integer())
                throw ConfigError("one_form.beta",
                                  "integer beta is excluded for the twisted comb "
                                  "(extra singularity at tau = 0)");
            if (sc.sigma <= 0) throw ConfigError("sigma", "required and positive for 'guinand'");
            break;
        case Command::Correlation:
            if (sc.t_values.empty()) throw ConfigError("t_values", "required for 'correlation'");
            break;
        case Command::Laplace:
        case Command::Mellin:
            if (sc.s_values.empty()) throw ConfigError("s_values", "required");
            break;
    }
    return sc;
}

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw Error("cannot write " + dir + "/" + name);
    out << content;
}

nlohmann::json complex_json(Complex z) { return {z.real(), z.imag()}; }

std::string csv_complex(Complex z) {
    return format_double(z.real()) + "," + format_double(z.imag());
}

nlohmann::json run_spectrum(const Scenario& sc) {
    LengthSpectrum spec =
        length_spectrum(sc.bodies[0], sc.bodies[1], sc.T, sc.one_form, sc.solver);
    write_file(sc.out_dir, "spectrum.csv", spectrum_csv(spec));
    return spectrum_metadata(sc.bodies[0], sc.bodies[1], spec);
}

nlohmann::json run_count(const Scenario& sc) {
    double tmax = *std::max_element(sc.t_values.begin(), sc.t_values.end());
    LengthSpectrum spec =
        length_spectrum(sc.bodies[0], sc.bodies[1], tmax, sc.one_form, sc.solver);
    ConvexBody c = minkowski_difference(sc.bodies[0], sc.bodies[1]);
    std::vector<double> poly = steiner_polynomial(c);
    double norm = std::pow(2.0 * M_PI, sc.dimension);
    auto prediction = [&](double t) {
        double p = 0, tp = 1;
        for (double coeff : poly) {
            p += coeff * tp;
            tp *= t;
        }
        return p / norm;
    };
    std::ostringstream os;
    os << "T,count,steiner_prediction\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double t : sc.t_values) {
        if (t > spec.T || t <= spec.T0) continue;
        long long n = counting_function(spec, t);
        double pred = prediction(t) - prediction(spec.T0);
        os << format_double(t) << "," << n << "," << format_double(pred) << "\n";
        rows.push_back({{"T", t}, {"count", n}, {"steiner_prediction", pred}});
    }
    write_file(sc.out_dir, "count.csv", os.str());
    nlohmann::json j;
    j["T0"] = spec.T0;
    j["rows"] = rows;
    return j;
}

nlohmann::json run_zeta(const Scenario& sc) {
    ConvexZetaEngine engine(sc.bodies[0], sc.bodies[1], sc.zeta_options);
    std::ostringstream os;
    os << "s_re,s_im,value_re,value_im,method,tail_bound\n";
    nlohmann::json rows = nlohmann::json::array();
    for (Complex s : sc.s_values) {
        ZetaValue v = sc.zeta_method == "direct" ? engine.direct(s, sc.t_max) : engine.continued(s);
        os << csv_complex(s) << "," << csv_complex(v.value) << "," << v.method << ","
           << format_double(v.tail_bound) << "\n";
        rows.push_back({{"s", complex_json(s)},
                        {"value", complex_json(v.value)},
                        {"method", v.method},
                        {"tail_bound", v.tail_bound}});
    }
    write_file(sc.out_dir, "zeta.csv", os.str());
    nlohmann::json j;
    j["t1"] = engine.t1();
    j["t3"] = engine.t3();
    j["values"] = rows;
    return j;
}

nlohmann::json run_residues(const Scenario& sc) {
    ConvexZetaEngine engine(sc.bodies[0], sc.bodies[1], sc.zeta_options);
    std::vector<PoleReport> reports = engine.pole_reports();
    std::ostringstream os;
    os << "location,residue_re,residue_im,predicted_re,predicted_im,relative_gap\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const PoleReport& r : reports) {
        os << r.location << "," << csv_complex(r.residue) << "," << csv_complex(r.predicted)
           << "," << format_double(r.relative_gap) << "\n";
        rows.push_back({{"location", r.location},
                        {"residue", complex_json(r.residue)},
                        {"predicted", complex_json(r.predicted)},
                        {"relative_gap", r.relative_gap}});
    }
    write_file(sc.out_dir, "residues.csv", os.str());
    nlohmann::json j;
    j["reports"] = rows;
    return j;
}

nlohmann::json run_scan(const Scenario& sc) {
    LengthSpectrum spec =
        length_spectrum(sc.bodies[0], sc.bodies[1], sc.T, sc.one_form, sc.solver);
    AtomicMeasure comb = dirac_comb(spec);
    ScanReport rep = singularity_scan(comb, sc.tau_grid, sc.scales, sc.scan_options);
    std::ostringstream os;
    os << "tau,scale,re,im,exponent,flag\n";
    for (std::size_t i = 0; i < rep.tau_grid.size(); ++i) {
        for (std::size_t k = 0; k < rep.scales.size(); ++k) {
            os << format_double(rep.tau_grid[i]) << "," << format_double(rep.scales[k]) << ","
               << csv_complex(rep.values[i][k]) << "," << format_double(rep.exponents[i]) << ","
               << (rep.flagged[i] ? 1 : 0) << "\n";
        }
    }
    write_file(sc.out_dir, "scan.csv", os.str());
    nlohmann::json j;
    j["atoms"] = comb.size();
    j["flagged_taus"] = rep.flagged_taus();
    nlohmann::json inconclusive = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.tau_grid.size(); ++i)
        if (rep.inconclusive[i]) inconclusive.push_back(rep.tau_grid[i]);
    j["inconclusive_taus"] = inconclusive;
    return j;
}

nlohmann::json run_guinand(const Scenario& sc) {
    LengthSpectrum spec12 =
        length_spectrum(sc.bodies[0], sc.bodies[1], sc.T, sc.one_form, sc.solver);
    LengthSpectrum spec21 =
        length_spectrum(sc.bodies[1], sc.bodies[0], sc.T, sc.one_form, sc.solver);
    spec21.orientation = Orientation::K2toK1;
    AtomicMeasure mu = guinand_meyer_measure(spec12, spec21, sc.dimension);

    // Candidate atoms at +-|xi + beta| and midgap probes between them.
    double radius = 1.0;
    std::vector<double> lambdas;
    while (true) {
        lambdas = twisted_spectrum(sc.one_form.beta, radius);
        std::size_t positive = 0;
        for (double l : lambdas)
            if (l > 0) ++positive;
        if (static_cast<int>(positive) >= sc.n_atoms || radius > 64.0) break;
        radius *= 1.5;
    }
    std::vector<double> cands;
    for (double l : lambdas)
        if (l > 0) cands.push_back(l);
    std::sort(cands.begin(), cands.end());
    if (static_cast<int>(cands.size()) > sc.n_atoms) cands.resize(sc.n_atoms);

    std::ostringstream os;
    os << "lambda,re,im,kind\n";
    nlohmann::json atoms = nlohmann::json::array(), midgaps = nlohmann::json::array();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        Complex v = atom_extract(mu, cands[i], sc.sigma);
        os << format_double(cands[i]) << "," << csv_complex(v) << ",atom\n";
        atoms.push_back({{"lambda", cands[i]}, {"value", complex_json(v)}});
        if (i + 1 < cands.size() && cands[i + 1] - cands[i] > 4.0 / sc.sigma) {
            double mid = 0.5 * (cands[i] + cands[i + 1]);
            Complex vm = atom_extract(mu, mid, sc.sigma);
            os << format_double(mid) << "," << csv_complex(vm) << ",midgap\n";
            midgaps.push_back({{"lambda", mid}, {"value", complex_json(vm)}});
        }
    }
    write_file(sc.out_dir, "guinand.csv", os.str());
    nlohmann::json j;
    j["measure_atoms"] = mu.size();
    j["sigma"] = sc.sigma;
    j["atoms"] = atoms;
    j["midgaps"] = midgaps;
    return j;
}

nlohmann::json run_correlation(const Scenario& sc) {
    const Observable& phi = sc.observables[0];
    const Observable& psi = sc.observables[1];
    std::vector<Complex> cor = correlation_grid(phi, psi, sc.t_values);
    CorrelationModes cm = CorrelationModes::build(phi, psi);
    std::ostringstream os;
    os << "t,re,im,leading_re,leading_im\n";
    for (std::size_t i = 0; i < sc.t_values.size(); ++i) {
        Complex lead = sc.t_values[i] >= 1.0
                           ? stationary_phase_leading(phi, psi, sc.t_values[i])
                           : cor[i];
        os << format_double(sc.t_values[i]) << "," << csv_complex(cor[i]) << ","
           << csv_complex(lead) << "\n";
    }
    write_file(sc.out_dir, "correlation.csv", os.str());
    nlohmann::json j;
    j["invariant"] = complex_json(cm.invariant);
    j["count"] = sc.t_values.size();
    return j;
}

nlohmann::json run_laplace(const Scenario& sc) {
    CorrelationTransforms ct(sc.observables[0], sc.observables[1], sc.transform_options);
    std::ostringstream os;
    os << "s_re,s_im,value_re,value_im,cutoff_re,cutoff_im,tail_re,tail_im\n";
    nlohmann::json rows = nlohmann::json::array();
    for (Complex s : sc.s_values) {
        TransformValue v = ct.laplace(s);
        os << csv_complex(s) << "," << csv_complex(v.value) << "," << csv_complex(v.cutoff_part)
           << "," << csv_complex(v.tail_part) << "\n";
        rows.push_back({{"s", complex_json(s)}, {"value", complex_json(v.value)}});
    }
    write_file(sc.out_dir, "laplace.csv", os.str());
    nlohmann::json j;
    j["t_split"] = sc.transform_options.t_split;
    j["values"] = rows;
    return j;
}

nlohmann::json run_mellin(const Scenario& sc) {
    CorrelationTransforms ct(sc.observables[0], sc.observables[1], sc.transform_options);
    std::ostringstream os;
    os << "s_re,s_im,value_re,value_im,m0_re,m0_im,minf_re,minf_im\n";
    nlohmann::json rows = nlohmann::json::array();
    for (Complex s : sc.s_values) {
        TransformValue v = ct.mellin(s);
        os << csv_complex(s) << "," << csv_complex(v.value) << "," << csv_complex(v.cutoff_part)
           << "," << csv_complex(v.tail_part) << "\n";
        rows.push_back({{"s", complex_json(s)}, {"value", complex_json(v.value)}});
    }
    write_file(sc.out_dir, "mellin.csv", os.str());
    nlohmann::json j;
    j["chi_cutoff"] = sc.transform_options.chi_cutoff;
    j["invariant"] = complex_json(ct.invariant());
    j["values"] = rows;
    return j;
}

}  // namespace

nlohmann::json run(const Scenario& sc) {
#ifdef _OPENMP
    omp_set_num_threads(sc.threads);
#endif
    nlohmann::json summary;
    summary["command"] = command_to_string(sc.command);
    summary["dimension"] = sc.dimension;
    nlohmann::json result;
    switch (sc.command) {
        case Command::Spectrum: result = run_spectrum(sc); break;
        case Command::Count: result = run_count(sc); break;
        case Command::Zeta: result = run_zeta(sc); break;
        case Command::Residues: result = run_residues(sc); break;
        case Command::Scan: result = run_scan(sc); break;
        case Command::Guinand: result = run_guinand(sc); break;
        case Command::Correlation: result = run_correlation(sc); break;
        case Command::Laplace: result = run_laplace(sc); break;
        case Command::Mellin: result = run_mellin(sc); break;
    }
    summary["result"] = result;
    write_file(sc.out_dir, "summary.json", summary.dump(2) + "\n");
    return summary;
}

}  // namespace orthospec
