// hconsist: command-line front end for the library.
//
// Exit codes: 0 success, 1 usage/config/domain error, 2 failed selftest criterion.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"

#include "hconsist/acceptance.hpp"
#include "hconsist/error.hpp"
#include "hconsist/growth.hpp"
#include "hconsist/numeric.hpp"
#include "hconsist/risk.hpp"
#include "hconsist/simulator.hpp"
#include "hconsist/solver.hpp"
#include "hconsist/transform.hpp"
#include "hconsist/verifier.hpp"

namespace {

using namespace hc;

constexpr const char* kVerifySchema = "# schema=hconsist.verify.v1";
constexpr const char* kGrowthSchema = "# schema=hconsist.growth.v1";
constexpr const char* kGapSchema = "# schema=hconsist.gap.v1";
constexpr const char* kTransformSchema = "# schema=hconsist.transform.v1";

struct SelftestFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Output goes to stdout, or to `path` through a temp file and rename.
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("cannot open " + tmp + " for writing");
        body(os);
        os.flush();
        if (!os) throw DomainError("write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

// ---------------------------------------------------------------- curves

struct CurveOpts {
    std::string family = "binary-linear";
    std::string loss = "hinge";
    std::string table = "comp_sum_phi";
    double B = 1.0, extra = 1.0, Lambda = 1.0, tau = 1.0, beta = 0.2, q = 0.5, rho = 1.0;
    int n = 2;
    bool adversarial = false, relaxed = false;

    void add(CLI::App* app) {
        app->add_option("--family", family,
                        "binary-linear | binary-nn | comp-sum | table | adversarial-rho | massart | bounded")
            ->capture_default_str();
        app->add_option("--loss", loss, "loss or Phi id within the family")->capture_default_str();
        app->add_option("--table", table, "comp_sum_phi | cstnd_phi | sum_loss | max_rho | cstnd_basic")
            ->capture_default_str();
        app->add_option("--B", B)->capture_default_str();
        app->add_option("--extra", extra, "sigmoid k or rho-margin rho")->capture_default_str();
        app->add_option("--Lambda", Lambda)->capture_default_str();
        app->add_option("--tau", tau)->capture_default_str();
        app->add_option("--beta", beta)->capture_default_str();
        app->add_option("--q", q)->capture_default_str();
        app->add_option("--rho", rho)->capture_default_str();
        app->add_option("--n", n)->capture_default_str();
        app->add_flag("--adversarial", adversarial, "Massart: adversarial form");
        app->add_flag("--relaxed", relaxed, "binary: use the relaxed inverse");
    }

    TransformCurve build() const {
        if (family == "binary-linear") return binary_linear_transform(loss, B, extra, relaxed);
        if (family == "binary-nn") return binary_nn_transform(loss, Lambda, B, extra, relaxed);
        if (family == "comp-sum") return comp_sum_transform(tau, n);
        if (family == "table") {
            TableParams p;
            p.n = n;
            p.q = q;
            p.B = B;
            p.rho = rho;
            return multiclass_table_transform(table_family_from_name(table), loss, p);
        }
        if (family == "adversarial-rho") return adversarial_rho_transform(B, rho);
        if (family == "massart") return massart_modified(binary_linear_transform(loss, B, extra), beta, adversarial);
        if (family == "bounded") return bounded_hypothesis_psi(loss, HypothesisClassSpec::bounded_symmetric(n, Lambda), q);
        throw DomainError("unknown transform family: " + family);
    }
};

void add_transform(CLI::App& root, std::string& out) {
    auto* app = root.add_subcommand("transform", "evaluate an error transformation T(t)");
    auto o = std::make_shared<CurveOpts>();
    auto t = std::make_shared<double>(0.0);
    auto grid = std::make_shared<int>(0);
    o->add(app);
    app->add_option("--t", *t, "argument in [0, 1]");
    app->add_option("--grid", *grid, "emit a CSV of T on this many grid points instead");
    app->callback([o, t, grid, &out] {
        auto c = o->build();
        if (*grid > 1) {
            emit(out, [&](std::ostream& os) {
                os << kTransformSchema << "\nt,T\n" << std::setprecision(17);
                for (double x : linspace(0.0, 1.0, *grid)) os << x << ',' << c.eval(x) << '\n';
            });
            return;
        }
        std::cout << num(c.eval(*t)) << '\n';
    });
}

void add_invert(CLI::App& root) {
    auto* app = root.add_subcommand("invert", "evaluate Gamma(s), the inverse of T");
    auto o = std::make_shared<CurveOpts>();
    auto s = std::make_shared<double>(0.0);
    o->add(app);
    app->add_option("--s", *s, "value of T")->required();
    app->callback([o, s] { std::cout << num(o->build().inverse(*s)) << '\n'; });
}

// ---------------------------------------------------------------- solver

void add_solve(CLI::App& root) {
    auto* app = root.add_subcommand("solve", "numerical transformation from the inf-sup characterization");
    struct Opts {
        std::string kind = "comp", phi = "neg_log", p_handling = "analytic", form = "lower_bound";
        double t = 0.5, q = 0.5, Lambda = 1.0, tau_cap = 10.0;
        int n = 3, grid = 512;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--kind", o->kind, "comp | cstnd | bounded-comp | bounded-cstnd | binary")->capture_default_str();
    app->add_option("--phi", o->phi, "auxiliary function id")->capture_default_str();
    app->add_option("--t", o->t)->capture_default_str();
    app->add_option("--n", o->n)->capture_default_str();
    app->add_option("--q", o->q, "gen_ce parameter")->capture_default_str();
    app->add_option("--Lambda", o->Lambda, "bounded classes: per-score bound")->capture_default_str();
    app->add_option("--tau-cap", o->tau_cap, "constrained: outer search range")->capture_default_str();
    app->add_option("--tau-grid", o->grid)->capture_default_str();
    app->add_option("--P-handling", o->p_handling, "analytic | grid")->capture_default_str();
    app->add_option("--cstnd-form", o->form, "lower_bound | exact")->capture_default_str();
    app->callback([o] {
        SolverConfig cfg;
        cfg.tau_grid_size = o->grid;
        if (o->p_handling == "grid") cfg.P_handling = PHandling::grid;
        else if (o->p_handling != "analytic") throw DomainError("--P-handling must be analytic or grid");
        if (o->form == "exact") cfg.cstnd_form = CstndForm::exact;
        else if (o->form != "lower_bound") throw DomainError("--cstnd-form must be lower_bound or exact");
        auto phi = phi::by_name(o->phi, o->q);
        auto cls = HypothesisClassSpec::bounded_symmetric(o->n, o->Lambda);
        SolveResult r;
        if (o->kind == "comp") r = solve_comp_transform_detail(phi, o->n, o->t, cfg);
        else if (o->kind == "cstnd") r = solve_cstnd_transform_detail(phi, o->n, o->t, o->tau_cap, cfg);
        else if (o->kind == "bounded-comp") r = solve_bounded_comp_transform_detail(phi, cls, o->t, cfg);
        else if (o->kind == "bounded-cstnd") r.value = solve_bounded_cstnd_transform(phi, cls, o->t, cfg);
        else if (o->kind == "binary") r.value = binary_transform_from_phi(phi, o->t);
        else throw DomainError("unknown solver kind: " + o->kind);
        std::cout << "value=" << num(r.value) << " tau_star=" << num(r.tau_star) << " mu_star=" << num(r.mu_star)
                  << " P_star=" << num(r.P_star) << '\n';
    });
}

// ---------------------------------------------------------------- verifier

std::vector<std::vector<double>> read_scores(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DomainError("cannot open " + path);
    std::vector<std::vector<double>> out;
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw DomainError("scores: unparsable row: " + line);
        if (!row.empty()) out.push_back(std::move(row));
    }
    return out;
}

void add_bound_params(CLI::App* app, BoundParams& p) {
    app->add_option("--W", p.W)->capture_default_str();
    app->add_option("--B", p.B)->capture_default_str();
    app->add_option("--k", p.k, "sigmoid")->capture_default_str();
    app->add_option("--rho", p.rho)->capture_default_str();
    app->add_option("--gamma", p.gamma)->capture_default_str();
    app->add_option("--beta", p.beta, "Massart")->capture_default_str();
    app->add_option("--tau", p.tau)->capture_default_str();
    app->add_option("--n", p.n)->capture_default_str();
    app->add_option("--Lambda", p.Lambda)->capture_default_str();
}

void add_verify(CLI::App& root, std::string& out) {
    auto* app = root.add_subcommand("verify", "check a bound on a finite-support distribution");
    struct Opts {
        std::string bound, dist, scores;
        BoundParams p;
        VerifyOptions v;
        int fuzz = 0;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--bound", o->bound, "family:loss, e.g. binary_linear:hinge or comp_sum:tau")->required();
    app->add_option("--dist", o->dist, "distribution file: weight norm p_1 ... p_n per row");
    app->add_option("--scores", o->scores, "score file: one row of scores per support point");
    app->add_option("--fuzz", o->fuzz, "run this many random instances instead of a file pair");
    app->add_option("--tight-tol", o->v.tight_tol)->capture_default_str();
    app->add_option("--surrogate-radius", o->v.surrogate_radius)->capture_default_str();
    add_bound_params(app, o->p);
    app->callback([o, &out, &root] {
        auto colon = o->bound.find(':');
        if (colon == std::string::npos) throw DomainError("--bound must look like family:loss");
        auto spec = make_bound(o->bound.substr(0, colon), o->bound.substr(colon + 1), o->p);
        if (o->fuzz > 0) {
            auto seed = root.get_option("--seed")->as<std::uint64_t>();
            auto f = fuzz_bound(spec, o->fuzz, seed);
            emit(out, [&](std::ostream& os) {
                os << kVerifySchema << "\nbound,instances,min_slack,worst_instance\n" << std::setprecision(17);
                os << f.id << ',' << f.instances << ',' << f.min_slack << ',' << f.worst_instance << '\n';
            });
            return;
        }
        if (o->dist.empty() || o->scores.empty()) throw DomainError("verify needs --dist and --scores (or --fuzz)");
        std::ifstream ds(o->dist);
        if (!ds) throw DomainError("cannot open " + o->dist);
        auto dist = DiscreteDistribution::read(ds);
        auto r = verify_bound(spec, dist, read_scores(o->scores), o->v);
        emit(out, [&](std::ostream& os) {
            os << kVerifySchema << '\n'
               << "bound,target_excess,surrogate_excess,target_gap,surrogate_gap,lhs,rhs,slack,tight\n"
               << std::setprecision(17) << spec.id << ',' << r.target_excess << ',' << r.surrogate_excess << ','
               << r.target_gap << ',' << r.surrogate_gap << ',' << r.lhs << ',' << r.rhs << ',' << r.slack << ','
               << (r.tight ? 1 : 0) << '\n';
        });
    });
}

void add_tightness(CLI::App& root) {
    auto* app = root.add_subcommand("tightness", "run a tightness construction");
    struct Opts {
        std::string kind = "comp", loss = "hinge";
        double tau = 1.0, beta = 0.5, B = 1.0, t = 0.5, extra = 1.0;
        int n = 3, grid = 100000;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--kind", o->kind, "comp | binary")->capture_default_str();
    app->add_option("--tau", o->tau)->capture_default_str();
    app->add_option("--beta", o->beta)->capture_default_str();
    app->add_option("--n", o->n)->capture_default_str();
    app->add_option("--loss", o->loss, "binary: hinge | sigmoid | rho | ...")->capture_default_str();
    app->add_option("--B", o->B)->capture_default_str();
    app->add_option("--t", o->t)->capture_default_str();
    app->add_option("--extra", o->extra, "sigmoid k or rho")->capture_default_str();
    app->add_option("--grid", o->grid, "binary: hypothesis grid size on [-B, 0)")->capture_default_str();
    app->callback([o] {
        if (o->kind == "comp") {
            auto r = tightness_comp_sum(o->tau, o->n, o->beta);
            std::cout << "target=" << num(r.achieved_target) << " surrogate=" << num(r.achieved_surrogate)
                      << " T=" << num(r.T_value) << '\n';
        } else if (o->kind == "binary") {
            auto r = tightness_binary(o->loss, o->B, o->t, o->grid, o->extra);
            std::cout << "target=" << num(r.target) << " surrogate=" << num(r.surrogate) << " T=" << num(r.T_value)
                      << " slack=" << num(r.slack) << " h_star=" << num(r.h_star)
                      << " resolution=" << num(r.resolution) << '\n';
        } else {
            throw DomainError("unknown tightness kind: " + o->kind);
        }
    });
}

void add_witness(CLI::App& root) {
    auto* app = root.add_subcommand("witness", "print a negative-result witness");
    struct Opts {
        std::string kind = "adversarial-convex", phi;
        int n = 3;
        double B = 1.0, W = 1.0, gamma = 0.1;
        bool perturb = false;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--kind", o->kind, "adversarial-convex | adversarial-symmetric | max-loss")->capture_default_str();
    app->add_option("--phi", o->phi, "auxiliary function (default hinge, sigmoid for adversarial-symmetric)");
    app->add_option("--n", o->n)->capture_default_str();
    app->add_option("--B", o->B)->capture_default_str();
    app->add_option("--W", o->W)->capture_default_str();
    app->add_option("--gamma", o->gamma)->capture_default_str();
    app->add_flag("--perturb", o->perturb, "move h0 to a separating / tie-breaking hypothesis");
    app->callback([o] {
        WitnessRecord w;
        if (o->kind == "adversarial-convex" || o->kind == "adversarial-symmetric") {
            std::string id = o->phi.empty() ? (o->kind == "adversarial-symmetric" ? "sigmoid" : "hinge") : o->phi;
            auto cls = HypothesisClassSpec::linear(o->W, o->B);
            cls.gamma = o->gamma;
            w = negative_witness_adversarial(cls, phi::by_name(id), o->perturb);
        } else if (o->kind == "max-loss") {
            w = negative_witness_max_loss(o->n, phi::by_name(o->phi.empty() ? "hinge" : o->phi), o->perturb);
        } else {
            throw DomainError("unknown witness kind: " + o->kind);
        }
        std::cout << "(" << num(w.target_excess) << ", " << num(w.surrogate_excess) << ")\n";
        std::cerr << w.description << ": target " << num(w.target_risk) << " - " << num(w.target_best)
                  << ", surrogate " << num(w.surrogate_risk) << " - " << num(w.surrogate_best) << '\n';
    });
}

void add_gap(CLI::App& root, std::string& out) {
    auto* app = root.add_subcommand("gap", "comp-sum minimizability gaps for deterministic distributions");
    struct Opts {
        double Lambda = 1.0, R_star = -1.0;
        int n = 3;
        std::vector<double> taus{0.0, 1.0, 1.5, 2.0};
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--Lambda", o->Lambda)->capture_default_str();
    app->add_option("--n", o->n)->capture_default_str();
    app->add_option("--R-star", o->R_star, "best-in-class tau = 0 risk (default: the pointwise infimum)");
    app->add_option("--taus", o->taus, "ascending tau values")->delimiter(',');
    app->callback([o, &out] {
        double R = o->R_star >= 0 ? o->R_star : std::exp(-2.0 * o->Lambda) * (o->n - 1);
        auto g = gap_ordering_check(o->Lambda, o->n, R, o->taus);
        emit(out, [&](std::ostream& os) {
            os << kGapSchema << "\ntau,gap,margin_to_next\n" << std::setprecision(17);
            for (std::size_t i = 0; i < g.taus.size(); ++i) {
                os << g.taus[i] << ',' << g.gaps[i] << ',';
                if (i < g.margins.size()) os << g.margins[i];
                os << '\n';
            }
        });
        if (!g.nonincreasing) std::cerr << "gap: ordering violated\n";
    });
}

void add_simulate(CLI::App& root, std::string& out) {
    auto* app = root.add_subcommand("simulate", "Monte-Carlo risks on the two simulation distributions");
    struct Opts {
        std::string scenario = "nonadversarial";
        std::vector<double> sigmas;
        std::vector<std::string> losses;
        SimulationSpec spec;
        bool quadrature = false;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--scenario", o->scenario, "nonadversarial | adversarial")->capture_default_str();
    app->add_option("--sigma,--sigmas", o->sigmas, "one or more sigma values, descending")->delimiter(',')->required();
    app->add_option("--samples", o->spec.sample_count)->capture_default_str();
    app->add_option("--shards", o->spec.shards)->capture_default_str();
    app->add_option("--gamma", o->spec.gamma)->capture_default_str();
    app->add_option("--losses", o->losses, "comma separated loss ids")->delimiter(',');
    app->add_flag("--quadrature", o->quadrature, "emit the quadrature oracle instead of Monte Carlo");
    app->callback([o, &out, &root] {
        auto spec = o->spec;
        spec.scenario = scenario_from_name(o->scenario);
        spec.losses = o->losses;
        spec.seed = root.get_option("--seed")->as<std::uint64_t>();
        std::vector<SimResult> rows;
        if (o->quadrature) {
            for (double s : o->sigmas) {
                spec.sigma = s;
                rows.push_back(quadrature_risks(spec));
            }
        } else {
            rows = sweep_sigma(spec, o->sigmas);
        }
        emit(out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    });
}

void add_growth(CLI::App& root, std::string& out) {
    auto* app = root.add_subcommand("growth", "log-log growth-rate fit near t = 0");
    struct Opts {
        std::string curve, phi;
        double t_min = 1e-4, t_max = 1e-2;
        int points = 41;
    };
    auto o = std::make_shared<Opts>();
    auto* c = app->add_option("--curve", o->curve, "binary_logistic | binary_exp | binary_sq_hinge | comp_sum_tau1 | "
                                                   "cstnd_exp | binary_hinge | binary_rho | mae | cstnd_hinge");
    auto* p = app->add_option("--phi", o->phi, "binary transform computed from this auxiliary function");
    c->excludes(p);
    app->add_option("--t-min", o->t_min)->capture_default_str();
    app->add_option("--t-max", o->t_max)->capture_default_str();
    app->add_option("--points", o->points)->capture_default_str();
    app->callback([o, &out] {
        std::function<double(double)> T;
        if (!o->curve.empty()) {
            T = growth_curve(o->curve);
        } else if (!o->phi.empty()) {
            auto phi = phi::by_name(o->phi);
            T = [phi](double t) { return binary_transform_from_phi(phi, t); };
        } else {
            throw DomainError("growth needs --curve or --phi");
        }
        auto g = fit_growth(T, o->t_min, o->t_max, o->points);
        emit(out, [&](std::ostream& os) {
            os << kGrowthSchema << "\nt,T,fitted,residual\n" << std::setprecision(17);
            for (std::size_t i = 0; i < g.t_grid.size(); ++i)
                os << g.t_grid[i] << ',' << g.T_values[i] << ',' << g.fitted(i) << ','
                   << std::log(g.T_values[i]) - std::log(g.fitted(i)) << '\n';
            os << "# summary slope=" << g.slope << " c=" << g.c << " C=" << g.C << " power=" << g.envelope_power
               << '\n';
        });
    });
}

void add_selftest(CLI::App& root) {
    auto* app = root.add_subcommand("selftest", "run the acceptance criteria");
    struct Opts {
        std::vector<std::string> only;
        std::int64_t samples = 1000000;
    };
    auto o = std::make_shared<Opts>();
    app->add_option("--only", o->only, "criterion ids or names")->delimiter(',');
    app->add_option("--samples", o->samples, "simulator sample count")->capture_default_str();
    app->callback([o, &root] {
        AcceptanceOptions opt;
        opt.samples = o->samples;
        opt.seed = root.get_option("--seed")->as<std::uint64_t>();
        std::vector<int> ids;
        for (const auto& s : o->only) ids.push_back(criterion_from_string(s));
        if (ids.empty()) ids = criterion_ids();
        std::string first_failure;
        for (int id : ids) {
            auto r = run_criterion(id, opt);
            print_result(std::cout, r);
            if (!r.pass && first_failure.empty()) first_failure = std::to_string(id) + " (" + r.name + ")";
        }
        if (!first_failure.empty()) throw SelftestFailed("selftest: first failing criterion " + first_failure);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hconsist: consistency-bound transformations and checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; [section] names select subcommands");
    app.allow_config_extras(CLI::config_extras_mode::error);
    std::uint64_t seed = 20240601;
    std::string out;
    app.add_option("--seed", seed, "seed for every random stream")->capture_default_str();
    app.add_option("-o,--out", out, "output file for CSV results (written atomically)");

    add_transform(app, out);
    add_invert(app);
    add_solve(app);
    add_verify(app, out);
    add_tightness(app);
    add_witness(app);
    add_gap(app, out);
    add_simulate(app, out);
    add_growth(app, out);
    add_selftest(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const SelftestFailed& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
