// sweep.hpp: Parameter sweeps over Γ, Θ, τ or κ and their CSV plot-data output.

#pragma once

#include "lzsm/dissipator.hpp"
#include "lzsm/hamiltonian.hpp"
#include "lzsm/phenomenological.hpp"
#include "lzsm/propagator.hpp"
#include "lzsm/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lzsm {

enum class Model { Microscopic, Phenomenological, Closed };
enum class SweepAxis { Gamma, Theta, Tau, Kappa };

inline std::string to_string(Model m) {
    switch (m) {
        case Model::Microscopic: return "microscopic";
        case Model::Phenomenological: return "phenomenological";
        case Model::Closed: return "closed";
    }
    return "?";
}

inline std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::Theta: return "theta";
        case SweepAxis::Tau: return "tau";
        case SweepAxis::Kappa: return "kappa";
    }
    return "?";
}

/// Invalid configuration; `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::invalid_argument(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

inline Model parse_model(const std::string& s) {
    if (s == "microscopic") return Model::Microscopic;
    if (s == "phenomenological") return Model::Phenomenological;
    if (s == "closed") return Model::Closed;
    throw ConfigError("model", "unknown model '" + s + "' (expected microscopic|phenomenological|closed)");
}

inline SweepAxis parse_axis(const std::string& s) {
    if (s == "gamma") return SweepAxis::Gamma;
    if (s == "theta") return SweepAxis::Theta;
    if (s == "tau") return SweepAxis::Tau;
    if (s == "kappa") return SweepAxis::Kappa;
    throw ConfigError("sweep", "unknown axis '" + s + "' (expected gamma|theta|tau|kappa)");
}

struct AxisSpec {
    SweepAxis axis{SweepAxis::Gamma};
    double min{1e-3};
    double max{1e3};
    std::size_t points{61};
    bool log{false};
};

struct SweepConfig {
    Model model{Model::Microscopic};
    SystemParams system{};        // Ω = 1, ω₃ = 10³, τ = 30
    BathParams bath{};            // Γ = 0, Θ = 0
    std::optional<AxisSpec> sweep;
    IntegratorOptions integrator{};
    unsigned jobs{1};
    std::string output;

    void validate() const {
        auto positive = [](double v, const char* field) {
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be a finite positive number");
        };
        positive(system.kappa, "kappa");
        positive(system.omega3, "omega3");
        positive(system.tau, "tau");
        if (!(bath.gamma >= 0.0) || !std::isfinite(bath.gamma)) throw ConfigError("gamma", "must be >= 0");
        if (!(bath.theta >= 0.0) || !std::isfinite(bath.theta)) throw ConfigError("theta", "must be >= 0");
        positive(integrator.rel_tol, "rel-tol");
        positive(integrator.abs_tol, "abs-tol");
        if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
        if (sweep) {
            if (sweep->points < 2) throw ConfigError("points", "must be >= 2");
            if (!std::isfinite(sweep->min) || !std::isfinite(sweep->max)) throw ConfigError("min", "must be finite");
            if (!(sweep->min < sweep->max)) throw ConfigError("min", "must be < max");
            if (sweep->log && !(sweep->min > 0.0)) throw ConfigError("min", "log spacing requires min > 0");
            const bool strictly_positive = sweep->axis == SweepAxis::Tau || sweep->axis == SweepAxis::Kappa;
            if (strictly_positive && !(sweep->min > 0.0))
                throw ConfigError("min", to_string(sweep->axis) + " must stay > 0");
            if (!(sweep->min >= 0.0)) throw ConfigError("min", to_string(sweep->axis) + " must stay >= 0");
        }
    }

    std::vector<double> grid() const {
        if (!sweep) return {};
        const auto& s = *sweep;
        std::vector<double> g(s.points);
        const double n1 = static_cast<double>(s.points - 1);
        for (std::size_t k = 0; k < s.points; ++k) {
            const double f = static_cast<double>(k) / n1;
            g[k] = s.log ? std::pow(10.0, std::log10(s.min) + f * (std::log10(s.max) - std::log10(s.min)))
                         : s.min + f * (s.max - s.min);
        }
        g.front() = s.min;
        g.back() = s.max;
        return g;
    }

    /// Copy of the configuration with the sweep axis set to `value`.
    SweepConfig at(double value) const {
        SweepConfig c = *this;
        if (!sweep) return c;
        switch (sweep->axis) {
            case SweepAxis::Gamma: c.bath.gamma = value; break;
            case SweepAxis::Theta: c.bath.theta = value; break;
            case SweepAxis::Tau: c.system.tau = value; break;
            case SweepAxis::Kappa: c.system.kappa = value; break;
        }
        return c;
    }

    /// Flat key-value form; keys mirror the command-line flag names.
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["model"] = to_string(model);
        j["omega"] = system.omega;
        j["kappa"] = system.kappa;
        j["omega3"] = system.omega3;
        j["tau"] = system.tau;
        j["gamma"] = bath.gamma;
        j["theta"] = bath.theta;
        if (sweep) {
            j["sweep"] = to_string(sweep->axis);
            j["min"] = sweep->min;
            j["max"] = sweep->max;
            j["points"] = sweep->points;
            j["log"] = sweep->log;
        }
        j["rel-tol"] = integrator.rel_tol;
        j["abs-tol"] = integrator.abs_tol;
        j["jobs"] = jobs;
        if (!output.empty()) j["output"] = output;
        return j;
    }
};

/// Applies the keys of a flat JSON object onto `cfg`. Unknown keys and type
/// mismatches raise ConfigError naming the key.
inline void apply_json(SweepConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
    auto num = [&](const std::string& key) {
        const auto& v = j.at(key);
        if (!v.is_number()) throw ConfigError(key, "expected a number");
        return v.get<double>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "model") {
            if (!value.is_string()) throw ConfigError(key, "expected a string");
            cfg.model = parse_model(value.get<std::string>());
        } else if (key == "omega") {
            if (num(key) != 1.0) throw ConfigError(key, "the coupling fixes the unit system and must be 1");
        } else if (key == "kappa") {
            cfg.system.kappa = num(key);
        } else if (key == "omega3") {
            cfg.system.omega3 = num(key);
        } else if (key == "tau") {
            cfg.system.tau = num(key);
        } else if (key == "gamma") {
            cfg.bath.gamma = num(key);
        } else if (key == "theta") {
            cfg.bath.theta = num(key);
        } else if (key == "sweep") {
            if (!value.is_string()) throw ConfigError(key, "expected a string");
            if (!cfg.sweep) cfg.sweep = AxisSpec{};
            cfg.sweep->axis = parse_axis(value.get<std::string>());
        } else if (key == "min" || key == "max") {
            if (!cfg.sweep) cfg.sweep = AxisSpec{};
            (key == "min" ? cfg.sweep->min : cfg.sweep->max) = num(key);
        } else if (key == "points") {
            if (!value.is_number_integer() || value.get<long long>() < 0)
                throw ConfigError(key, "expected a non-negative integer");
            if (!cfg.sweep) cfg.sweep = AxisSpec{};
            cfg.sweep->points = value.get<std::size_t>();
        } else if (key == "log") {
            if (!value.is_boolean()) throw ConfigError(key, "expected true or false");
            if (!cfg.sweep) cfg.sweep = AxisSpec{};
            cfg.sweep->log = value.get<bool>();
        } else if (key == "rel-tol") {
            cfg.integrator.rel_tol = num(key);
        } else if (key == "abs-tol") {
            cfg.integrator.abs_tol = num(key);
        } else if (key == "jobs") {
            if (!value.is_number_integer() || value.get<long long>() < 1) throw ConfigError(key, "expected an integer >= 1");
            cfg.jobs = value.get<unsigned>();
        } else if (key == "output") {
            if (!value.is_string()) throw ConfigError(key, "expected a string");
            cfg.output = value.get<std::string>();
        } else {
            throw ConfigError(key, "unknown configuration key");
        }
    }
}

inline SweepConfig load_config_file(const std::string& path, SweepConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    apply_json(base, j);
    return base;
}

struct SweepResultRow {
    double axis{};
    Populations p{};
    double trace_error{};
    double min_eig{};
    double wall_time{};
    std::string error;   // non-empty when the evolution failed

    bool ok() const { return error.empty(); }

    /// Populations outside [0, 1] (positivity defects of the generator).
    bool flagged() const {
        return std::any_of(p.begin(), p.end(), [](double x) { return x < 0.0 || x > 1.0; });
    }
    bool within_tolerance() const {
        return std::all_of(p.begin(), p.end(), [](double x) { return x >= -1e-3 && x <= 1.0 + 1e-3; });
    }
};

/// One evolution at the configuration's fixed parameters.
inline SweepResultRow run_point(const SweepConfig& cfg, double axis_value) {
    SweepResultRow row;
    row.axis = axis_value;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (cfg.model) {
            case Model::Microscopic:
            case Model::Closed: {
                const BathParams bath = cfg.model == Model::Closed ? BathParams{0.0, 0.0} : cfg.bath;
                const auto rec = evolve(cfg.system, bath, DensityMatrix::basis_projector(0), cfg.integrator);
                row.p = rec.final_populations();
                row.trace_error = rec.trace_error;
                row.min_eig = rec.min_eig;
                break;
            }
            case Model::Phenomenological: {
                const auto tr = phenom_evolve(phenom_params_from(cfg.system, cfg.bath.gamma), cfg.integrator);
                // P3 is the population lost from the two-level subspace
                row.p = {tr.p1.back(), tr.p2.back(), 1.0 - tr.norm.back()};
                row.trace_error = std::abs(row.p[0] + row.p[1] + row.p[2] - 1.0);
                row.min_eig = std::min({*std::min_element(tr.p1.begin(), tr.p1.end()),
                                        *std::min_element(tr.p2.begin(), tr.p2.end())});
                break;
            }
        }
    } catch (const std::exception& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.p = {nan, nan, nan};
        row.trace_error = nan;
        row.min_eig = nan;
        row.error = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

/// One row per grid value, sorted by axis. Points run on `cfg.jobs` threads;
/// each evolution is a pure function of its inputs.
inline std::vector<SweepResultRow> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (!cfg.sweep) throw ConfigError("sweep", "no sweep axis configured");
    const std::vector<double> grid = cfg.grid();
    std::vector<SweepResultRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) rows[k] = run_point(cfg.at(grid[k]), grid[k]);
    };
    const unsigned n = std::min<unsigned>(cfg.jobs, static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.axis < b.axis; });
    return rows;
}

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline constexpr const char* csv_header = "axis,P1,P2,P3,trace_error,min_eig,wall_time_s";

/// Metadata block, header and one line per row. LF line endings.
inline void write_csv(std::ostream& out, const std::vector<SweepResultRow>& rows, const SweepConfig& cfg) {
    if (rows.empty()) throw std::invalid_argument("write_csv: no rows");
    out << "# " << project_name << ' ' << project_version << '\n';
    out << "# config: " << cfg.to_json().dump() << '\n';
    if (cfg.sweep) out << "# axis: " << to_string(cfg.sweep->axis) << '\n';
    for (const auto& r : rows)
        if (!r.ok()) out << "# failed at axis=" << format_number(r.axis) << ": " << r.error << '\n';
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << format_number(r.axis) << ',' << format_number(r.p[0]) << ',' << format_number(r.p[1]) << ','
            << format_number(r.p[2]) << ',' << format_number(r.trace_error) << ',' << format_number(r.min_eig)
            << ',' << format_number(r.wall_time) << '\n';
    }
}

inline void emit_csv(const std::vector<SweepResultRow>& rows, const SweepConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot write '" + path + "'");
    write_csv(out, rows, cfg);
    if (!out) throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

} // namespace lzsm
