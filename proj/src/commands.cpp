#include "gtp/commands.hpp"

#include "gtp/analysis.hpp"
#include "gtp/config.hpp"
#include "gtp/csv.hpp"
#include "gtp/parallel.hpp"
#include "gtp/suites.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gtp {

namespace {

KeyValueConfig load_config(const CommandOptions& opts)
{
    KeyValueConfig cfg;
    if (!opts.config_path.empty()) cfg = KeyValueConfig::load(opts.config_path);
    if (opts.seed) cfg.set("run.seed", std::to_string(*opts.seed));
    return cfg;
}

nlohmann::json to_json(const VerificationReport& r)
{
    nlohmann::json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["max_violation"] = r.max_violation;
    j["tolerance"] = r.tolerance;
    j["first_violation"] = r.first_violation ? nlohmann::json(*r.first_violation) : nlohmann::json(nullptr);
    j["rounds_checked"] = r.rounds_checked;
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [k, v] : r.values) values[k] = v;
    j["values"] = values;
    return j;
}

// Opens `path` for writing, or hands back `fallback` when path is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            stream_ = &fallback;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw ConfigError("--out", "cannot open '" + path + "' for writing");
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }
    bool is_file() const { return stream_ == &file_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

template <class F>
int guarded(std::ostream& err, F&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const StepError& e) {
        err << "run failed: " << e.what() << '\n';
        return exit_check_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
}

struct RunSummary {
    std::int64_t n = 0;
    double log_capital = 0.0;
    double max_statistic = -std::numeric_limits<double>::infinity();
    double min_bound_margin = std::numeric_limits<double>::infinity();
};

RoundObserver summary_observer(RunSummary& s, std::optional<double> bound_c)
{
    return [&s, bound_c](const RoundView& v) {
        s.n = v.n;
        s.log_capital = v.log_capital;
        if (v.n < 3) return;
        const double avg = v.xbar.size() == 1 ? v.xbar[0] : norm(v.xbar);
        s.max_statistic = std::max(s.max_statistic, theorem_statistic(v.n, avg));
        if (bound_c)
            s.min_bound_margin =
                std::min(s.min_bound_margin, v.log_capital - capital_lower_bound(v.n, v.xbar[0], *bound_c));
    };
}

std::string optional_cell(double v)
{
    return std::isfinite(v) ? format_double(v) : std::string();
}

}  // namespace

int simulate_command(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto cfg = load_config(opts);
        const auto rc = build_run_config(cfg);
        Sink sink(opts.out.empty() ? rc.output : opts.out, out);
        std::ostream& report = sink.is_file() ? out : err;

        RunSummary summary;
        const auto traj = run_game(rc.strategy, rc.reality, rc.horizon, rc.seed, rc.record_every,
                                   summary_observer(summary, std::nullopt));
        write_trajectory_csv(sink.get(), traj);
        sink.get().flush();

        report << "final_n=" << summary.n << " final_log_capital=" << format_double(summary.log_capital)
               << " max_statistic=" << optional_cell(summary.max_statistic) << '\n';

        bool ok = true;
        for (const auto& check : rc.checks) {
            std::vector<VerificationReport> reports;
            if (check == "consistency") reports.push_back(check_trajectory_consistency(traj));
            if (check == "bound") reports.push_back(check_capital_bound(traj));
            if (check == "overshoot") reports.push_back(check_overshoot(traj));
            if (check == "linear") {
                reports.push_back(check_linear_bound(traj));
                reports.push_back(check_linear_sandwich(traj));
            }
            if (check == "one-sided") {
                const std::int64_t n0 =
                    default_block_start(traj.xbar).value_or(static_cast<std::int64_t>(traj.rows()) + 1);
                const auto blocks = decompose_blocks(traj.xbar, n0);
                reports.push_back(check_blocks(blocks, traj.xbar));
                reports.push_back(check_one_sided_constancy(traj, blocks));
            }
            for (const auto& r : reports) {
                ok = ok && r.passed;
                report << to_json(r).dump() << '\n';
            }
        }
        return ok ? exit_ok : exit_check_failed;
    });
}

int verify_command(const std::string& suite, const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end())
            throw ConfigError("suite", "unknown suite '" + suite + "'");
        const auto cfg = load_config(opts);
        const auto params = suite_params(cfg);
        Sink sink(opts.out, out);
        const auto reports = run_suite(suite, params, opts.jobs);
        std::size_t passed = 0;
        for (const auto& r : reports) {
            passed += r.passed ? 1 : 0;
            sink.get() << to_json(r).dump() << '\n';
        }
        sink.get().flush();
        err << "verify " << suite << ": " << passed << "/" << reports.size() << " checks passed\n";
        return passed == reports.size() ? exit_ok : exit_check_failed;
    });
}

int sweep_command(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto cfg = load_config(opts);
        const auto base = build_run_config(cfg);

        const bool has_c = std::holds_alternative<PastAverage>(base.strategy) ||
                           std::holds_alternative<OneSided>(base.strategy);
        const bool has_a = std::holds_alternative<RatePath>(base.reality);
        if (cfg.has("sweep.c") && !has_c)
            throw ConfigError("sweep.c", "needs strategy.kind = past-average or one-sided-*");
        if (cfg.has("sweep.a") && !has_a) throw ConfigError("sweep.a", "needs reality.kind = rate-path");

        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> cs = cfg.get_double_list("sweep.c").value_or(
            std::vector<double>{has_c ? cfg.get_double("strategy.c", 0.5) : nan});
        std::vector<double> as = cfg.get_double_list("sweep.a").value_or(
            std::vector<double>{has_a ? std::get<RatePath>(base.reality).a : nan});
        std::vector<std::uint64_t> horizons = cfg.get_uint_list("sweep.horizon").value_or(
            std::vector<std::uint64_t>{static_cast<std::uint64_t>(base.horizon)});
        std::vector<std::uint64_t> seeds =
            cfg.get_uint_list("sweep.seeds").value_or(std::vector<std::uint64_t>{base.seed});
        if (opts.seed && !cfg.has("sweep.seeds")) seeds = {*opts.seed};

        struct Cell {
            double c;
            double a;
            std::int64_t horizon;
            std::uint64_t seed;
            StrategySpec strategy;
            RealitySpec reality;
        };
        std::vector<Cell> cells;
        for (double c : cs)
            for (double a : as)
                for (std::uint64_t h : horizons)
                    for (std::uint64_t s : seeds) {
                        if (h < 1) throw ConfigError("sweep.horizon", "must be >= 1");
                        Cell cell{c, a, static_cast<std::int64_t>(h), s, base.strategy, base.reality};
                        if (auto* p = std::get_if<PastAverage>(&cell.strategy)) p->c = c;
                        if (auto* p = std::get_if<OneSided>(&cell.strategy)) p->c = c;
                        if (auto* r = std::get_if<RatePath>(&cell.reality)) r->a = a;
                        try {
                            validate(cell.strategy);
                            validate(cell.reality);
                        } catch (const std::invalid_argument& e) {
                            throw ConfigError(has_c && cfg.has("sweep.c") ? "sweep.c" : "sweep.a", e.what());
                        }
                        cells.push_back(std::move(cell));
                    }

        const bool bound = std::holds_alternative<PastAverage>(base.strategy);
        std::vector<RunSummary> results(cells.size());
        parallel_for(cells.size(), opts.jobs, [&](std::size_t i) {
            const auto& cell = cells[i];
            const auto bound_c = bound ? std::optional<double>(cell.c) : std::nullopt;
            run_game(cell.strategy, cell.reality, cell.horizon, cell.seed, cell.horizon,
                     summary_observer(results[i], bound_c));
        });

        Sink sink(opts.out.empty() ? base.output : opts.out, out);
        auto& os = sink.get();
        os << "c,a,horizon,seed,final_log_capital,max_statistic,min_bound_margin\n";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& cell = cells[i];
            const auto& r = results[i];
            os << optional_cell(cell.c) << ',' << optional_cell(cell.a) << ',' << cell.horizon << ','
               << cell.seed << ',' << format_double(r.log_capital) << ',' << optional_cell(r.max_statistic) << ','
               << optional_cell(r.min_bound_margin) << '\n';
        }
        os.flush();
        err << "sweep: " << cells.size() << " cells\n";
        return exit_ok;
    });
}

}  // namespace gtp
