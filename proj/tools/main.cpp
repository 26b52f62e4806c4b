#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nlbv/cheeger.hpp"
#include "nlbv/fidelity.hpp"
#include "nlbv/func.hpp"
#include "nlbv/geom.hpp"
#include "nlbv/parallel.hpp"
#include "nlbv/pnm.hpp"
#include "nlbv/verify.hpp"

namespace {

using namespace nlbv;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CommonOptions {
    std::string kernel_path;
    int window = 0; // 0: take the kernel JSON hint, else 4
    std::string weight_pgm;
    double w_lo = 1.0, w_hi = 1.0, w_const = 1.0;
    double spacing = 1.0;
    int pad = 0;
    std::string boundary = "free";
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_kernel = true) {
    auto* k = cmd->add_option("--kernel", o.kernel_path, "kernel spec JSON file");
    if (needs_kernel) k->required();
    cmd->add_option("--window", o.window, "truncation window in cells (overrides the JSON hint)");
    cmd->add_option("--weight", o.weight_pgm, "weight density PGM, rescaled to [w-lo, w-hi]");
    cmd->add_option("--w-lo", o.w_lo, "weight rescale lower bound");
    cmd->add_option("--w-hi", o.w_hi, "weight rescale upper bound");
    cmd->add_option("--w-const", o.w_const, "constant weight density");
    cmd->add_option("--spacing", o.spacing, "grid spacing h");
    cmd->add_option("--pad", o.pad, "zero-pad the grid by this many cells per side");
    cmd->add_option("--boundary", o.boundary, "free|closed: treatment outside the grid")
        ->check(CLI::IsMember({"free", "closed"}));
    cmd->add_option("--threads", o.threads, "worker threads (NLBV_THREADS overrides)");
}

Exterior exterior_of(const CommonOptions& o) {
    return o.boundary == "closed" ? Exterior::None : Exterior::Zero;
}

std::pair<Kernel, int> load_kernel(const CommonOptions& o) {
    std::ifstream in(o.kernel_path);
    if (!in) throw InvalidParameter("cannot open kernel file " + o.kernel_path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto [spec, window_hint] = kernel_spec_from_json(ss.str());
    int window = o.window > 0 ? o.window : window_hint.value_or(4);
    return {make_kernel(spec), window};
}

GridDomain padded_grid(const GridDomain& g, int pad) {
    if (pad == 0) return g;
    if (g.dim() == 1)
        return GridDomain::line(g.nx() + 2 * pad, g.spacing(), g.origin()[0] - pad * g.spacing());
    return GridDomain::plane(g.nx() + 2 * pad, g.ny() + 2 * pad, g.spacing(),
                             {g.origin()[0] - pad * g.spacing(), g.origin()[1] - pad * g.spacing()});
}

DiscreteFunction pad_function(const DiscreteFunction& f, int pad) {
    if (pad == 0) return f;
    GridDomain g = padded_grid(f.grid(), pad);
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g.size());
    for (int i = 0; i < f.grid().size(); ++i)
        v[g.index(f.grid().cell_x(i) + pad, f.grid().cell_y(i) + pad)] = f[i];
    return DiscreteFunction(g, std::move(v));
}

DiscreteFunction crop_function(const DiscreteFunction& f, const GridDomain& target, int pad) {
    if (pad == 0) return f;
    Eigen::ArrayXd v(target.size());
    for (int i = 0; i < target.size(); ++i)
        v[i] = f[f.grid().index(target.cell_x(i) + pad, target.cell_y(i) + pad)];
    return DiscreteFunction(target, std::move(v));
}

DiscreteSet pad_set(const DiscreteSet& s, int pad) {
    if (pad == 0) return s;
    GridDomain g = padded_grid(s.grid(), pad);
    DiscreteSet out(g);
    for (int i : s.cells())
        out.set(g.index(s.grid().cell_x(i) + pad, s.grid().cell_y(i) + pad), true);
    return out;
}

DiscreteSet crop_set(const DiscreteSet& s, const GridDomain& target, int pad) {
    if (pad == 0) return s;
    DiscreteSet out(target);
    for (int i = 0; i < target.size(); ++i)
        if (s.test(s.grid().index(target.cell_x(i) + pad, target.cell_y(i) + pad)))
            out.set(i, true);
    return out;
}

WeightMeasure load_weight(const CommonOptions& o, const GridDomain& grid, int pad) {
    if (o.weight_pgm.empty()) return WeightMeasure::constant(grid, o.w_const);
    WeightMeasure base = load_weight_pgm(o.weight_pgm, o.w_lo, o.w_hi, o.spacing);
    if (pad == 0) {
        require_same_grid(base.grid(), grid, "weight image");
        return base;
    }
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(grid.size(), base.w_lo());
    for (int i = 0; i < base.grid().size(); ++i)
        w[grid.index(base.grid().cell_x(i) + pad, base.grid().cell_y(i) + pad)] =
            base.density()[i];
    return WeightMeasure(grid, std::move(w));
}

EnergyModel build_model(const CommonOptions& o, const Kernel& kernel, int window,
                        const GridDomain& grid, int pad) {
    KernelTable table = tabulate_offsets(kernel, grid, window);
    return EnergyModel(grid, table, load_weight(o, grid, pad), exterior_of(o));
}

void write_energy_csv(std::ostream& os, const EnergyBreakdown& e) {
    os << "lambda,tv,fidelity,total\n"
       << num(e.lambda) << ',' << num(e.tv_term) << ',' << num(e.fidelity_term) << ','
       << num(e.total) << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InvalidParameter("cannot open output file " + path);
    return os;
}

// Applies the flat JSON config as baseline arguments; explicit flags win
// through the take-last policy.
std::vector<std::string> config_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("config JSON: ") + e.what());
    }
    std::vector<std::string> args;
    for (auto& [key, value] : j.items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + key);
        } else if (value.is_string()) {
            args.push_back("--" + key + "=" + value.get<std::string>());
        } else {
            args.push_back("--" + key + "=" + value.dump());
        }
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-local TV-L1 denoising and Cheeger analysis on grids"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // -------- kernel-info
    auto* info = app.add_subcommand("kernel-info", "print the kernel assumption report");
    CommonOptions info_o;
    std::string probe_list;
    add_common(info, info_o);
    info->add_option("--probe", probe_list, "comma-separated probe radii for estimated checks");

    // -------- tv / perimeter
    auto* tv = app.add_subcommand("tv", "K-variation of a PGM image");
    CommonOptions tv_o;
    std::string tv_input, tv_csv;
    add_common(tv, tv_o);
    tv->add_option("--input", tv_input, "input PGM")->required();
    tv->add_option("--csv", tv_csv, "write the energy row to this file");

    auto* per = app.add_subcommand("perimeter", "K-perimeter of a PBM set");
    CommonOptions per_o;
    std::string per_input, per_csv;
    add_common(per, per_o);
    per->add_option("--input", per_input, "input PBM")->required();
    per->add_option("--csv", per_csv, "write the energy row to this file");

    // -------- geom
    auto* geom = app.add_subcommand("geom", "exact geometric denoising of a set datum");
    CommonOptions geom_o;
    std::string geom_input, geom_out_min, geom_out_max, geom_csv;
    double geom_lambda = 0.0;
    add_common(geom, geom_o);
    geom->add_option("--input", geom_input, "datum PBM")->required();
    geom->add_option("--lambda", geom_lambda, "fidelity parameter")->required();
    geom->add_option("--out-min", geom_out_min, "minimal solution PBM");
    geom->add_option("--out-max", geom_out_max, "maximal solution PBM");
    geom->add_option("--csv", geom_csv, "energy row output");

    // -------- denoise
    auto* den = app.add_subcommand("denoise", "TV-L1 denoising of a PGM image");
    CommonOptions den_o;
    std::string den_input, den_out, den_csv, den_stack = "minimal";
    double den_lambda = 0.0;
    int den_levels = 16;
    add_common(den, den_o);
    den->add_option("--input", den_input, "input PGM")->required();
    den->add_option("--lambda", den_lambda, "fidelity parameter")->required();
    den->add_option("--levels", den_levels, "quantization levels");
    den->add_option("--out", den_out, "denoised PGM output")->required();
    den->add_option("--csv", den_csv, "energy row output");
    den->add_option("--stack", den_stack, "minimal|maximal level stacking")
        ->check(CLI::IsMember({"minimal", "maximal"}));

    // -------- cheeger
    auto* che = app.add_subcommand("cheeger", "Cheeger constant and set of a PBM domain");
    CommonOptions che_o;
    std::string che_domain, che_out, che_trace;
    add_common(che, che_o);
    che->add_option("--domain", che_domain, "domain PBM")->required();
    che->add_option("--out", che_out, "Cheeger set PBM");
    che->add_option("--trace", che_trace, "Dinkelbach trace CSV");

    // -------- sweep
    auto* swp = app.add_subcommand("sweep", "fidelity sweep over a lambda range");
    CommonOptions swp_o;
    std::string swp_input, swp_csv;
    double swp_min = 0.0, swp_max = 0.0;
    int swp_points = 10, swp_levels = 16;
    add_common(swp, swp_o);
    swp->add_option("--input", swp_input, "datum (PBM for sets, PGM for images)")->required();
    swp->add_option("--lambda-min", swp_min)->required();
    swp->add_option("--lambda-max", swp_max)->required();
    swp->add_option("--points", swp_points, "number of sweep points");
    swp->add_option("--levels", swp_levels, "quantization levels for PGM data");
    swp->add_option("--csv", swp_csv, "sweep records CSV")->required();

    // -------- verify
    auto* ver = app.add_subcommand("verify", "run a property suite");
    std::string ver_suite = "all";
    std::uint64_t ver_seed = 7;
    ver->add_option("--suite", ver_suite, "energy|geom|cheeger|fidelity|rearrange|all")
        ->check(CLI::IsMember({"energy", "geom", "cheeger", "fidelity", "rearrange", "all"}));
    ver->add_option("--seed", ver_seed, "random seed");

    // --config: inject baseline arguments before the explicit ones
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) { config_path = argv[++i]; continue; }
        if (a.rfind("--config=", 0) == 0) { config_path = a.substr(9); continue; }
        args.push_back(a);
    }
    if (!config_path.empty() && !args.empty()) {
        std::vector<std::string> base;
        try {
            base = config_args(config_path);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        args.insert(args.begin() + 1, base.begin(), base.end());
    }

    try {
        std::vector<const char*> cargv{argv[0]};
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(int(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*info) {
            auto [kernel, window] = load_kernel(info_o);
            std::vector<double> probes;
            std::stringstream ss(probe_list);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) probes.push_back(std::stod(tok));
            KernelReport rep = check_assumptions(kernel, probes);
            std::cout << rep.pretty(kernel.dim());
            std::cout << "  window hint: " << window << " cells\n";
        } else if (*tv) {
            auto [kernel, window] = load_kernel(tv_o);
            DiscreteFunction f = pad_function(load_pgm(tv_input, tv_o.spacing), tv_o.pad);
            KernelTable table = tabulate_offsets(kernel, f.grid(), window);
            EnergyBreakdown e;
            e.tv_term = k_variation(f, table, exterior_of(tv_o));
            e.total = e.tv_term;
            if (!tv_csv.empty()) { auto os = open_out(tv_csv); write_energy_csv(os, e); }
            write_energy_csv(std::cout, e);
        } else if (*per) {
            auto [kernel, window] = load_kernel(per_o);
            DiscreteSet E = pad_set(load_pbm(per_input, per_o.spacing), per_o.pad);
            KernelTable table = tabulate_offsets(kernel, E.grid(), window);
            EnergyBreakdown e;
            e.tv_term = k_perimeter(E, table,
                                    per_o.boundary == "closed" ? Exterior::None : Exterior::Zero);
            e.total = e.tv_term;
            if (!per_csv.empty()) { auto os = open_out(per_csv); write_energy_csv(os, e); }
            write_energy_csv(std::cout, e);
        } else if (*geom) {
            auto [kernel, window] = load_kernel(geom_o);
            DiscreteSet E0 = load_pbm(geom_input, geom_o.spacing);
            DiscreteSet E = pad_set(E0, geom_o.pad);
            EnergyModel model = build_model(geom_o, kernel, window, E.grid(), geom_o.pad);
            GeomSolution sol = solve_geometric(E, geom_lambda, model);
            if (!geom_out_min.empty()) save_pbm(geom_out_min, crop_set(sol.minimal, E0.grid(), geom_o.pad));
            if (!geom_out_max.empty()) save_pbm(geom_out_max, crop_set(sol.maximal, E0.grid(), geom_o.pad));
            if (!geom_csv.empty()) { auto os = open_out(geom_csv); write_energy_csv(os, sol.energy); }
            write_energy_csv(std::cout, sol.energy);
        } else if (*den) {
            auto [kernel, window] = load_kernel(den_o);
            DiscreteFunction f0 = load_pgm(den_input, den_o.spacing);
            DiscreteFunction f = pad_function(f0, den_o.pad);
            EnergyModel model = build_model(den_o, kernel, window, f.grid(), den_o.pad);
            FunctionalSolution sol = solve_functional(
                f, den_lambda, model, den_levels,
                den_stack == "maximal" ? Stacking::Maximal : Stacking::Minimal, den_o.threads);
            save_pgm(den_out, crop_function(sol.u, f0.grid(), den_o.pad), 0.0, 1.0);
            if (!den_csv.empty()) { auto os = open_out(den_csv); write_energy_csv(os, sol.energy); }
            write_energy_csv(std::cout, sol.energy);
        } else if (*che) {
            auto [kernel, window] = load_kernel(che_o);
            DiscreteSet omega0 = load_pbm(che_domain, che_o.spacing);
            DiscreteSet omega = pad_set(omega0, che_o.pad);
            EnergyModel model = build_model(che_o, kernel, window, omega.grid(), che_o.pad);
            CheegerResult res = cheeger_solve(omega, model);
            std::cout << "h," << num(res.h) << "\ncells," << res.cheeger_set.cell_count()
                      << "\ncertificate," << (certificate_check(res, omega, model) ? 1 : 0) << "\n";
            if (!che_out.empty()) save_pbm(che_out, crop_set(res.cheeger_set, omega0.grid(), che_o.pad));
            if (!che_trace.empty()) {
                auto os = open_out(che_trace);
                os << "step,h,linearized_min,cells\n";
                for (std::size_t k = 0; k < res.trace.size(); ++k)
                    os << k << ',' << num(res.trace[k].ratio) << ','
                       << num(res.trace[k].linearized_min) << ',' << res.trace[k].set_cells << '\n';
            }
        } else if (*swp) {
            auto [kernel, window] = load_kernel(swp_o);
            if (!(swp_points >= 2)) throw InvalidParameter("sweep needs at least 2 points");
            std::vector<double> lambdas;
            for (int k = 0; k < swp_points; ++k)
                lambdas.push_back(swp_min + (swp_max - swp_min) * k / (swp_points - 1));
            std::vector<SweepRecord> records;
            bool is_set = swp_input.size() >= 4 &&
                          swp_input.compare(swp_input.size() - 4, 4, ".pbm") == 0;
            if (is_set) {
                DiscreteSet E = pad_set(load_pbm(swp_input, swp_o.spacing), swp_o.pad);
                EnergyModel model = build_model(swp_o, kernel, window, E.grid(), swp_o.pad);
                records = sweep_geometric(E, lambdas, model, swp_o.threads);
            } else {
                DiscreteFunction f = pad_function(load_pgm(swp_input, swp_o.spacing), swp_o.pad);
                EnergyModel model = build_model(swp_o, kernel, window, f.grid(), swp_o.pad);
                records = sweep_functional(f, lambdas, model, swp_levels, swp_o.threads);
            }
            auto os = open_out(swp_csv);
            os << "lambda,tv,fidelity,mu,n_min,n_max,jump\n";
            for (const auto& r : records)
                os << num(r.lambda) << ',' << num(r.energy.tv_term) << ','
                   << num(r.energy.fidelity_term) << ',' << num(r.mu) << ',' << r.n_min << ','
                   << r.n_max << ',' << (r.is_jump_candidate ? 1 : 0) << '\n';
        } else if (*ver) {
            auto results = run_verify_suite(ver_suite, ver_seed);
            bool all_pass = true;
            std::cout << "suite,check,pass,detail\n";
            for (const auto& r : results) {
                std::cout << r.suite << ',' << r.name << ',' << (r.pass ? 1 : 0) << ','
                          << r.detail << '\n';
                all_pass = all_pass && r.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
