// Batch front end: named experiments writing CSV/JSON artifacts plus a
// manifest that echoes the fully resolved configuration.

#include "sdm/cft.hpp"
#include "sdm/circuit.hpp"
#include "sdm/free_fermion.hpp"
#include "sdm/ising.hpp"
#include "sdm/serialize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

using namespace sdm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Config {
    std::string experiment;
    std::string profile = "ci";
    std::uint64_t seed = 1;
    fs::path out_dir = "out";
    json parameters = json::object();
};

const std::set<std::string> kExperiments = {
    "ising-bounds", "ising-mps-sv", "ff-mutual-info", "ff-trT2",
    "ff-divergence", "cft-consistency", "holo-crossover", "protocol-table"};

[[noreturn]] void fail(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(2);
}

void check_known_keys(const json& params, const std::set<std::string>& known) {
    for (auto it = params.begin(); it != params.end(); ++it)
        if (!known.count(it.key())) fail("unknown parameter key: " + it.key());
}

double param(const json& p, const std::string& key, double fallback) {
    return p.contains(key) ? p.at(key).get<double>() : fallback;
}

std::string csv_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

class Csv {
  public:
    Csv(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) fail("cannot open " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << csv_num(vals[i]);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

void write_manifest(const Config& cfg, const json& resolved_params, int exit_status) {
    json m{{"experiment", cfg.experiment},
           {"profile", cfg.profile},
           {"seed", cfg.seed},
           {"output_dir", cfg.out_dir.string()},
           {"parameters", resolved_params},
           {"exit_status", exit_status}};
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    m["timestamp_utc"] = static_cast<long long>(now);
    std::ofstream(cfg.out_dir / "manifest.json") << m.dump(2) << "\n";
}

std::vector<double> time_grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (double t = lo; t <= hi + 1e-9; t += step) out.push_back(t);
    return out;
}

// ---------------------------------------------------------------- experiments

int run_protocol_table(const Config& cfg) {
    check_known_keys(cfg.parameters, {"shots"});
    const long shots = static_cast<long>(param(cfg.parameters, "shots", 40000));

    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    ProtocolSpec spec;
    spec.rho = plus * plus.adjoint();
    spec.evolution = ChannelSpec::from_unitary(Matrix::Identity(2, 2));
    spec.regions = RegionSpec{{0}, {0}, 1, 2};
    spec.seed = cfg.seed;

    const auto exact2 = run_trT2(spec);
    const auto exactd = run_trTTd(spec);
    spec.shots = shots;
    const auto shot2 = run_trT2(spec);
    const auto shotd = run_trTTd(spec);
    const double im_sim = imagitivity_from_protocols(shot2.estimate, shotd.estimate.real());

    json rows = json::array();
    auto row = [&](const std::string& q, double theory, double sim, double err) {
        rows.push_back(
            json{{"quantity", q}, {"theory", theory}, {"simulated", sim}, {"stderr", err}});
    };
    row("Re Tr T^2", 1.0, shot2.estimate.real(), shot2.stderr_est);
    row("Im Tr T^2", 0.0, shot2.estimate.imag(), shot2.stderr_est);
    row("Tr T Tdag", 2.0, shotd.estimate.real(), shotd.stderr_est);
    row("imagitivity^2", 2.0, im_sim * im_sim, 0.0);
    std::ofstream(cfg.out_dir / "protocol_table.json")
        << json{{"shots", shots}, {"rows", rows}}.dump(2) << "\n";

    const bool exact_ok = std::abs(exact2.estimate - Complex(1.0, 0.0)) < 1e-10 &&
                          std::abs(exactd.estimate.real() - 2.0) < 1e-10;
    return exact_ok ? 0 : 1;
}

int run_ising_bounds(const Config& cfg) {
    check_known_keys(cfg.parameters, {"n", "j", "h", "bz", "temperature", "site_a", "site_b",
                                      "obs", "t_max", "t_step"});
    IsingParams p;
    p.n_sites = static_cast<Index>(param(cfg.parameters, "n", cfg.profile == "figure" ? 11 : 8));
    p.j = param(cfg.parameters, "j", 1.0);
    p.h = param(cfg.parameters, "h", -1.05);
    p.b_z = param(cfg.parameters, "bz", 0.5);
    const ThermalSpec spec{param(cfg.parameters, "temperature", 100.0)};
    const Index site_a = static_cast<Index>(param(cfg.parameters, "site_a", 0));
    const Index site_b = static_cast<Index>(param(cfg.parameters, "site_b", 5));
    const std::string obs =
        cfg.parameters.contains("obs") ? cfg.parameters.at("obs").get<std::string>() : "Y";
    const auto times = time_grid(0.0, param(cfg.parameters, "t_max", 10.0),
                                 param(cfg.parameters, "t_step", 0.25));

    const auto sweep = commutator_sweep(p, spec, site_a, site_b, obs.at(0), times);
    Csv csv(cfg.out_dir / "ising_bounds.csv",
            "time[1/J],commutator_ratio[1],mt_inf_norm[1],imagitivity2[1],lower_bound[1]");
    bool chain_ok = true;
    for (const auto& pt : sweep) {
        csv.row({pt.time, pt.commutator_ratio, pt.mt_inf_norm, pt.imagitivity2, pt.lower_bound});
        chain_ok = chain_ok && pt.commutator_ratio <= pt.mt_inf_norm + 1e-9 &&
                   pt.mt_inf_norm <= pt.imagitivity2 + 1e-9 &&
                   pt.lower_bound <= pt.mt_inf_norm + 1e-9;
    }
    return chain_ok ? 0 : 1;
}

int run_ising_mps_sv(const Config& cfg) {
    check_known_keys(cfg.parameters, {"n", "k", "slot_site", "dts", "temperatures"});
    IsingParams p;
    p.n_sites = static_cast<Index>(param(cfg.parameters, "n", cfg.profile == "figure" ? 10 : 6));
    const Index k = static_cast<Index>(param(cfg.parameters, "k", 4));
    const Index slot = static_cast<Index>(param(cfg.parameters, "slot_site", 0));
    std::vector<double> dts{1.0, 10.0, 100.0};
    if (cfg.parameters.contains("dts")) dts = cfg.parameters.at("dts").get<std::vector<double>>();
    std::vector<double> temps{1.0, 10.0, 100.0};
    if (cfg.parameters.contains("temperatures"))
        temps = cfg.parameters.at("temperatures").get<std::vector<double>>();

    Csv csv(cfg.out_dir / "singular_values.csv",
            "index[1],singular_value[1],dt[1/J],temperature[J]");
    for (double temp : temps)
        for (double dt : dts) {
            const RealVector sv = multi_time_singular_values(p, {temp}, slot, dt, k);
            for (Index i = 0; i < sv.size(); ++i)
                csv.row({static_cast<double>(i + 1), sv(i), dt, temp});
        }
    return 0;
}

int run_ff_mutual_info(const Config& cfg) {
    check_known_keys(cfg.parameters, {"l", "t_min", "t_max", "t_step"});
    const Index l = static_cast<Index>(param(cfg.parameters, "l", 40));
    const auto times =
        time_grid(param(cfg.parameters, "t_min", 5.0), param(cfg.parameters, "t_max", 35.0),
                  param(cfg.parameters, "t_step", 1.0));
    const auto pts = mutual_info_scan(l, times);
    Csv csv(cfg.out_dir / "mutual_info.csv", "t[lattice],re[1],im[1]");
    Csv cft(cfg.out_dir / "mutual_info_cft.csv", "t[lattice],value[1]");
    for (const auto& pt : pts) {
        csv.row({pt.t, pt.mutual_info.real(), pt.mutual_info.imag()});
        const double ll = static_cast<double>(l);
        cft.row({pt.t, std::log(std::abs(1.0 - ll * ll / (pt.t * pt.t))) / 3.0});
    }
    return 0;
}

int run_ff_trT2(const Config& cfg) {
    check_known_keys(cfg.parameters, {"a_lo", "a_len", "b_lo", "b_len", "t_max", "window"});
    IntervalPair geom;
    geom.a_lo = static_cast<Index>(param(cfg.parameters, "a_lo", 0));
    geom.a_len = static_cast<Index>(param(cfg.parameters, "a_len", 50));
    geom.b_lo = static_cast<Index>(param(cfg.parameters, "b_lo", 70));
    geom.b_len = static_cast<Index>(param(cfg.parameters, "b_len", 50));
    const double t_max = param(cfg.parameters, "t_max", 66.0);
    const double window = param(cfg.parameters, "window", 6.0);

    // light-cone crossing times of the u-chirality
    const std::vector<double> crossings{
        static_cast<double>(geom.b_lo - (geom.a_lo + geom.a_len)),
        static_cast<double>(geom.b_lo - geom.a_lo),
        static_cast<double>(geom.b_lo + geom.b_len - (geom.a_lo + geom.a_len)),
        static_cast<double>(geom.b_lo + geom.b_len - geom.a_lo)};
    auto in_window = [&](double t) {
        for (double c : crossings)
            if (std::abs(t - c) <= window) return true;
        return false;
    };
    std::vector<double> times;
    for (double t = 1.0; t <= t_max; t += 1.0)
        if (!in_window(t)) times.push_back(t);

    const auto lattice = tr_T2_scan(geom, times);
    const auto lattice0 = tr_T2_scan(geom, {0.0});

    const auto kin0 = CftKinematics::intervals(geom.a_lo, geom.a_lo + geom.a_len, geom.b_lo,
                                               geom.b_lo + geom.b_len, 0.0);
    const Complex pref = lattice0[0].tr_t2 / tr_T2_torus(kin0, z2_free_fermion);

    Csv lat(cfg.out_dir / "tr_t2_lattice.csv", "t[lattice],re[1],im[1]");
    Csv cft(cfg.out_dir / "tr_t2_cft.csv", "t[lattice],re[1],im[1]");
    for (const auto& pt : lattice) {
        lat.row({pt.t, pt.tr_t2.real(), pt.tr_t2.imag()});
        const Complex pred = pref * tr_T2_torus(kin0.at_time(pt.t), z2_free_fermion);
        cft.row({pt.t, pred.real(), pred.imag()});
    }
    return 0;
}

int run_ff_divergence(const Config& cfg) {
    check_known_keys(cfg.parameters, {"scales"});
    std::vector<Index> scales{1, 2, 4, 8};
    if (cfg.parameters.contains("scales"))
        scales = cfg.parameters.at("scales").get<std::vector<Index>>();
    else if (cfg.profile == "figure")
        scales = {1, 2, 3, 4, 5, 6, 8, 10};
    const auto pts = lattice_divergence_demo(scales);
    Csv csv(cfg.out_dir / "divergence.csv", "scale[1],spacing[a],log_ratio[1]");
    bool monotone = true;
    for (size_t i = 0; i < pts.size(); ++i) {
        csv.row({static_cast<double>(pts[i].scale), pts[i].spacing, pts[i].log_ratio});
        if (i > 0) monotone = monotone && pts[i].log_ratio > pts[i - 1].log_ratio;
    }
    return monotone ? 0 : 1;
}

int run_cft_consistency(const Config& cfg) {
    check_known_keys(cfg.parameters, {"points", "t_max"});
    const int points = static_cast<int>(param(cfg.parameters, "points", 20));
    const double t_max = param(cfg.parameters, "t_max", 47.5);
    Csv csv(cfg.out_dir / "keystone.csv", "t[lattice],re22[1],im22[1],re19[1],im19[1],rel_diff[1]");
    bool ok = true;
    for (int i = 0; i < points; ++i) {
        const double t = t_max * i / (points - 1);
        const auto k = CftKinematics::intervals(0, 50, 70, 120, t);
        const Complex v22 = tr_T2_torus(k, z2_free_fermion);
        const Complex v19 = ff_tsallis_two_intervals(k, 2);
        const double rel = std::abs(v22 - v19) / std::abs(v19);
        csv.row({t, v22.real(), v22.imag(), v19.real(), v19.imag(), rel});
        ok = ok && rel < 1e-9;
    }
    auto p4 = [](Complex z) { return z * z * z * z; };
    const Complex q = std::exp(Complex(-kPi, 0.0));
    ok = ok && std::abs(p4(theta3(q)) - p4(theta2(q)) - p4(theta4(q))) < 1e-12;
    ok = ok && std::abs(tau_from_x(Complex(0.5)) - Complex(0, 0.5)) < 1e-12;
    ok = ok && std::abs(x_from_tau(tau_from_x(Complex(0.3))) - Complex(0.3)) < 1e-10;
    return ok ? 0 : 1;
}

int run_holo_crossover(const Config& cfg) {
    check_known_keys(cfg.parameters, {"l", "c", "eps_uv"});
    const double l = param(cfg.parameters, "l", 1.0);
    const double c = param(cfg.parameters, "c", 1.0);
    const double eps = param(cfg.parameters, "eps_uv", 0.01);

    Csv csv(cfg.out_dir / "crossover.csv",
            "dt[L],re_connected[1],re_disconnected[1],connected_selected[1]");
    for (double dt = 0.0; dt <= 2.0 * l + 1e-9; dt += 0.05 * l) {
        const auto s = holographic_two_interval(l, dt, c, eps);
        csv.row({dt, s.connected.real(), s.disconnected.real(), s.connected_selected ? 1.0 : 0.0});
    }
    double lo = l, hi = 2.0 * l;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holographic_two_interval(l, mid, c, eps).connected_selected ? lo : hi) = mid;
    }
    const double crossover = 0.5 * (lo + hi);
    std::ofstream(cfg.out_dir / "crossover.json")
        << json{{"crossover_dt", crossover},
                {"sqrt2_l", std::sqrt(2.0) * l},
                {"abs_error", std::abs(crossover - std::sqrt(2.0) * l)}}
               .dump(2)
        << "\n";
    return std::abs(crossover - std::sqrt(2.0) * l) <= 1e-9 * l ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spacetime density matrix toolkit"};
    std::string config_path, experiment, profile, out_dir;
    std::int64_t seed = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--experiment", experiment, "experiment name");
    app.add_option("--profile", profile, "ci or figure");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--out", out_dir, "output directory");
    CLI11_PARSE(app, argc, argv);

    if (const char* threads = std::getenv("SDM_THREADS")) Eigen::setNbThreads(std::atoi(threads));

    Config cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) fail("cannot read config " + config_path);
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            fail(std::string("config parse: ") + e.what());
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k != "experiment" && k != "profile" && k != "seed" && k != "output_dir" &&
                k != "parameters")
                fail("unknown config key: " + k);
        }
        if (j.contains("experiment")) cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("profile")) cfg.profile = j.at("profile").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output_dir")) cfg.out_dir = j.at("output_dir").get<std::string>();
        if (j.contains("parameters")) cfg.parameters = j.at("parameters");
    }
    if (!experiment.empty()) cfg.experiment = experiment;
    if (!profile.empty()) cfg.profile = profile;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    if (!kExperiments.count(cfg.experiment)) {
        std::cerr << "error: unknown or missing experiment '" << cfg.experiment << "'; one of:";
        for (const auto& e : kExperiments) std::cerr << " " << e;
        std::cerr << "\n";
        return 2;
    }
    if (cfg.profile != "ci" && cfg.profile != "figure") fail("profile must be ci or figure");
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);

    int status = 1;
    try {
        if (cfg.experiment == "protocol-table") status = run_protocol_table(cfg);
        else if (cfg.experiment == "ising-bounds") status = run_ising_bounds(cfg);
        else if (cfg.experiment == "ising-mps-sv") status = run_ising_mps_sv(cfg);
        else if (cfg.experiment == "ff-mutual-info") status = run_ff_mutual_info(cfg);
        else if (cfg.experiment == "ff-trT2") status = run_ff_trT2(cfg);
        else if (cfg.experiment == "ff-divergence") status = run_ff_divergence(cfg);
        else if (cfg.experiment == "cft-consistency") status = run_cft_consistency(cfg);
        else if (cfg.experiment == "holo-crossover") status = run_holo_crossover(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = 2;
    }
    write_manifest(cfg, cfg.parameters, status);
    if (status == 0) std::cout << cfg.experiment << ": ok, artifacts in " << cfg.out_dir << "\n";
    return status;
}
