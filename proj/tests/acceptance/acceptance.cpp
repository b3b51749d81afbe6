// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wtrace/cli.hpp"
#include "wtrace/report.hpp"

namespace fs = std::filesystem;
using wtrace::Json;

namespace {

// u = x e^{-x}, p = 2, theta = 0.5 (tests/oracles/frozen_values.txt).
constexpr double kHardyOracle = 1.4545454545454545;

fs::path g_root;

struct Run {
    int code = -1;
    Json report;
    std::string log;
};

Run run_cli(const std::string& subcommand, const std::string& config, const fs::path& out, int refine = 0) {
    fs::create_directories(out);
    const auto cfg = out / "run.cfg";
    std::ofstream(cfg) << config;
    wtrace::cli::Options opt;
    opt.subcommand = subcommand;
    opt.config_path = cfg.string();
    opt.out_dir = (out / "report").string();
    opt.refine = refine;
    std::ostringstream log;
    Run r;
    r.code = wtrace::cli::run(opt, log);
    r.log = log.str();
    std::ifstream in(out / "report" / (subcommand + ".json"));
    if (in) r.report = Json::parse(in);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Criterion {
public:
    explicit Criterion(std::string name) : name_(std::move(name)) {}

    void require(bool ok, const std::string& what) {
        passed_ = passed_ && ok;
        if (!details_.empty()) details_ += "; ";
        details_ += (ok ? "" : "FAILED ") + what;
    }

    // Every check of the report, plus exit code 0.
    void require_report(const Run& r, const std::string& tag) {
        if (r.code != wtrace::cli::kSuccess) {
            require(false, tag + " exit " + std::to_string(r.code));
            if (!r.log.empty()) std::cerr << r.log;
        }
        if (r.report.is_null()) {
            require(false, tag + " wrote no report");
            return;
        }
        for (const auto& ch : r.report["checks"]) {
            require(ch["passed"].get<bool>(), tag + " " + ch["name"].get<std::string>() + "=" +
                                                  wtrace::format_double(ch["value"].get<double>()));
        }
    }

    bool passed() const { return passed_; }
    const std::string& name() const { return name_; }
    const std::string& details() const { return details_; }

private:
    std::string name_;
    std::string details_;
    bool passed_ = true;
};

using Body = std::function<void(Criterion&, const fs::path&)>;

void kernel_identities(Criterion& c, const fs::path& dir) {
    const auto r = run_cli("kernel-check",
                           "kernel.x1 = 0.1, 0.5, 1, 2\nkernel.dims = 1, 2\nkernel.max_order = 2\n"
                           "kernel.mass_tol = 1e-6\nkernel.moment_tol = 1e-6\n",
                           dir);
    c.require_report(r, "kernel-check");
}

void right_inverse(Criterion& c, const fs::path& dir) {
    const auto r = run_cli("extend", "battery.size = 10\nextend.trace_tol = 1e-3\nextend.residual_levels = 1\n", dir);
    c.require_report(r, "extend");
    if (!r.report.is_null()) {
        const double a = r.report["max_trace_error"].get<double>();
        const double b = r.report["max_trace_error_fine"].get<double>();
        c.require(a <= 1e-3, "max_trace_error=" + wtrace::format_double(a));
        c.require(b <= 0.5 * a, "refined=" + wtrace::format_double(b));
    }
}

void heat_residual(Criterion& c, const fs::path& dir) {
    const auto r = run_cli("extend",
                           "battery.size = 0\nextend.residual_levels = 4\nextend.min_residual_slope = 1.8\n"
                           "extend.residual_x1_max = 1\n",
                           dir);
    c.require_report(r, "extend");
}

void representation(Criterion& c, const fs::path& dir) {
    const auto one = run_cli("repr-check", "n = 1\nbattery.size = 10\nrepr.tol = 1e-4\n", dir / "n1");
    c.require_report(one, "n=1");
    const auto two = run_cli("repr-check",
                             "n = 2\ntheta = 1.5\nbattery.size = 1\nrepr.eps = 0.25\nrepr.tol = 1e-3\n"
                             "repr.mollifier_cells = 4\nrepr.lambda_cells = 4\n",
                             dir / "n2");
    c.require_report(two, "n=2");
}

void trace_constant(Criterion& c, const fs::path& dir) {
    struct Case {
        int n;
        double p, theta;
    };
    for (const Case k : {Case{1, 2, 0.5}, Case{1, 2, 1.5}, Case{1, 3, 0.5}, Case{2, 2, 1.5}}) {
        std::ostringstream cfg, tag;
        cfg << "n = " << k.n << "\np = " << k.p << "\ntheta = " << k.theta << "\nbattery.size = 20\n"
            << "trace.drift_tol = 0.1\n";
        tag << "n=" << k.n << ",p=" << k.p << ",theta=" << k.theta;
        // n = 1 compares refinement levels 1 and 2; the plane case levels 0 and 1.
        c.require_report(run_cli("trace-check", cfg.str(), dir / tag.str(), k.n == 1 ? 1 : 0), tag.str());
    }
}

void extension_constant(Criterion& c, const fs::path& dir) {
    const auto r = run_cli("extend", "battery.size = 10\nextend.drift_tol = 0.1\nextend.residual_levels = 1\n", dir);
    c.require_report(r, "extend");
}

void hardy(Criterion& c, const fs::path& dir) {
    const auto r = run_cli("norms", "p = 2\ntheta = 0.5\nn = 1\nbattery.size = 20\n", dir);
    c.require_report(r, "norms");
    if (!r.report.is_null()) {
        const double ratio = r.report["hardy"]["reference"]["ratio"].get<double>();
        const double rel = std::abs(ratio - kHardyOracle) / kHardyOracle;
        c.require(rel <= 0.01, "ratio=" + wtrace::format_double(ratio) + " vs oracle, rel " + wtrace::format_double(rel));
    }
}

void bvp(Criterion& c, const fs::path& dir) {
    for (const std::string form : {"nondivergence", "divergence"}) {
        c.require_report(run_cli("bvp", "bvp.form = " + form + "\nbvp.min_dt_slope = 0.9\nbvp.min_dx_slope = 1.9\n"
                                        "bvp.drift_tol = 0.1\n",
                                 dir / form),
                         form);
    }
}

void determinism(Criterion& c, const fs::path& dir) {
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"trace-check", "battery.size = 6\nthreads = 2\n"},
        {"norms", "battery.size = 6\nthreads = 2\n"},
        {"bvp", "battery.size = 4\nthreads = 2\nbvp.levels = 2\n"},
    };
    for (const auto& [sub, cfg] : runs) {
        const auto a = dir / (sub + "_a");
        const auto b = dir / (sub + "_b");
        run_cli(sub, cfg, a);
        run_cli(sub, cfg, b);
        std::size_t files = 0;
        bool same = true;
        for (const auto& e : fs::directory_iterator(a / "report")) {
            ++files;
            same = same && slurp(e.path()) == slurp(b / "report" / e.path().filename());
        }
        c.require(same && files > 0, sub + " " + std::to_string(files) + " files identical");
    }
}

}  // namespace

int main() {
    g_root = fs::temp_directory_path() / ("wtrace_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(g_root);
    struct Item {
        std::string name;
        double budget_s;
        Body body;
    };
    const std::vector<Item> items = {
        {"1 kernel identities", 30, kernel_identities},
        {"2 right inverse", 300, right_inverse},
        {"3 heat residual order", 300, heat_residual},
        {"4 representation identity", 600, representation},
        {"5 trace constant drift", 900, trace_constant},
        {"6 extension constant", 600, extension_constant},
        {"7 Hardy ratio", 60, hardy},
        {"8 boundary value problem", 600, bvp},
        {"9 determinism", 600, determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        Criterion c(items[i].name);
        const auto start = std::chrono::steady_clock::now();
        try {
            items[i].body(c, g_root / std::to_string(i + 1));
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(secs <= items[i].budget_s, "runtime " + wtrace::format_double(std::round(secs * 10) / 10) + " s");
        std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name() << ": " << c.details() << std::endl;
        if (!c.passed()) ++failed;
    }
    fs::remove_all(g_root);
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
