#include "gtp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace gtp {

namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "strategy.kind", "strategy.epsilon", "strategy.c", "strategy.mixture", "strategy.levels",
        "strategy.nodes", "strategy.form", "strategy.symmetric_max_rounds", "strategy.matrix_path",
        "reality.kind", "reality.p", "reality.b", "reality.a", "reality.n_start",
        "reality.magnitude", "reality.dim", "reality.direction", "reality.axis", "reality.period",
        "run.horizon", "run.seed", "run.record_every", "run.output", "run.checks",
        "verify.paths", "verify.max_length", "verify.horizon", "verify.seeds",
        "verify.tail_n", "verify.tail_epsilon", "verify.tail_trials",
        "verify.mixture_paths", "verify.mixture_max_n", "verify.linear_horizon",
        "verify.linear_matrices", "verify.separation_horizon",
        "sweep.c", "sweep.a", "sweep.horizon", "sweep.seeds",
    };
    return keys;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text)
{
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field))
{
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source)
{
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno), "empty key");
        if (cfg.has(key)) throw ConfigError(key, "duplicate key (line " + std::to_string(lineno) + ")");
        cfg.set(key, trim(std::string_view(body).substr(eq + 1)));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    auto cfg = parse(in, path.string());
    cfg.set_base_dir(path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
    return cfg;
}

void KeyValueConfig::set(const std::string& key, std::string value)
{
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
    entries_[key] = std::move(value);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.contains(key); }

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    return raw(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    const auto v = raw(key);
    return v ? parse_double(key, *v) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const
{
    const auto v = raw(key);
    return v ? parse_integer<std::int64_t>(key, *v) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const
{
    const auto v = raw(key);
    return v ? parse_integer<std::uint64_t>(key, *v) : fallback;
}

std::optional<std::vector<double>> KeyValueConfig::get_double_list(const std::string& key) const
{
    const auto v = raw(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split(*v, ',')) out.push_back(parse_double(key, item));
    return out;
}

std::optional<std::vector<std::uint64_t>> KeyValueConfig::get_uint_list(const std::string& key) const
{
    const auto v = raw(key);
    if (!v) return std::nullopt;
    std::vector<std::uint64_t> out;
    for (const auto& item : split(*v, ',')) out.push_back(parse_integer<std::uint64_t>(key, item));
    return out;
}

std::vector<std::string> KeyValueConfig::get_string_list(const std::string& key) const
{
    const auto v = raw(key);
    return v ? split(*v, ',') : std::vector<std::string>{};
}

// ---------------------------------------------------------------------------

Matrix parse_matrix(std::istream& in, const std::string& source)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        std::istringstream is(line.substr(0, hash));
        std::vector<double> row;
        std::string tok;
        while (is >> tok) row.push_back(parse_double(source, tok));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(source, "matrix file is empty");
    for (const auto& r : rows)
        if (r.size() != rows.size()) throw ConfigError(source, "matrix must be square");
    Matrix m(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
    return m;
}

Matrix load_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("strategy.matrix_path", "cannot open " + path.string());
    return parse_matrix(in, "strategy.matrix_path");
}

namespace {

// Re-tags std::invalid_argument from spec validation ("field: message").
[[noreturn]] void rethrow_as_config(const std::invalid_argument& e)
{
    const std::string what = e.what();
    const auto colon = what.find(':');
    if (colon == std::string::npos) throw ConfigError("config", what);
    throw ConfigError(what.substr(0, colon), trim(std::string_view(what).substr(colon + 1)));
}

}  // namespace

StrategySpec build_strategy(const KeyValueConfig& cfg)
{
    const std::string kind = cfg.get_string("strategy.kind", "past-average");
    StrategySpec spec;
    try {
        if (kind == "fixed-epsilon") {
            spec = FixedEpsilon{cfg.get_double("strategy.epsilon", 0.0)};
        } else if (kind == "past-average") {
            spec = PastAverage{cfg.get_double("strategy.c", 0.5)};
        } else if (kind == "one-sided-positive" || kind == "one-sided-negative") {
            spec = OneSided{kind == "one-sided-positive" ? Side::positive : Side::negative,
                            cfg.get_double("strategy.c", 0.5)};
        } else if (kind == "mixture") {
            Mixture m;
            const std::string dist = cfg.get_string("strategy.mixture", "uniform-half");
            if (dist == "uniform-half")
                m.distribution = UniformHalf{};
            else if (dist == "dyadic")
                m.distribution = DyadicDiscrete{static_cast<int>(cfg.get_int("strategy.levels", 20))};
            else
                throw ConfigError("strategy.mixture", "expected uniform-half or dyadic, got '" + dist + "'");
            const std::string form = cfg.get_string("strategy.form", "accounts");
            if (form == "accounts")
                m.form = MixtureForm::accounts;
            else if (form == "symmetric")
                m.form = MixtureForm::symmetric_functions;
            else
                throw ConfigError("strategy.form", "expected accounts or symmetric, got '" + form + "'");
            m.quadrature_nodes = static_cast<int>(cfg.get_int("strategy.nodes", 64));
            m.symmetric_max_rounds = cfg.get_int("strategy.symmetric_max_rounds", 64);
            spec = m;
        } else if (kind == "linear") {
            const auto path = cfg.raw("strategy.matrix_path");
            if (!path) throw ConfigError("strategy.matrix_path", "required for strategy.kind = linear");
            std::filesystem::path p(*path);
            if (p.is_relative()) p = cfg.base_dir() / p;
            spec = LinearOperator{LinearOperatorSpec(load_matrix(p))};
        } else {
            throw ConfigError("strategy.kind", "unknown strategy '" + kind + "'");
        }
        validate(spec);
    } catch (const std::invalid_argument& e) {
        rethrow_as_config(e);
    }
    return spec;
}

RealitySpec build_reality(const KeyValueConfig& cfg)
{
    const std::string kind = cfg.get_string("reality.kind", "fair-coin");
    ScalarRealitySpec inner;
    if (kind == "fair-coin")
        inner = FairCoin{};
    else if (kind == "biased-coin")
        inner = BiasedCoin{cfg.get_double("reality.p", 0.5)};
    else if (kind == "uniform-noise")
        inner = UniformNoise{};
    else if (kind == "constant-bias")
        inner = ConstantBias{cfg.get_double("reality.b", 0.0)};
    else if (kind == "rate-path")
        inner = RatePath{cfg.get_double("reality.a", 1.0), cfg.get_int("reality.n_start", 3)};
    else if (kind == "adversarial")
        inner = AdversarialMinimizer{cfg.get_double("reality.magnitude", 1.0)};
    else
        throw ConfigError("reality.kind", "unknown reality '" + kind + "'");

    RealitySpec spec = std::visit([](const auto& s) -> RealitySpec { return s; }, inner);
    if (cfg.has("reality.dim") || cfg.has("reality.direction") || cfg.has("reality.axis")) {
        VectorUnitBall v;
        v.inner = inner;
        const std::string dir = cfg.get_string("reality.direction", "fixed");
        if (dir == "fixed")
            v.direction = DirectionMode::fixed;
        else if (dir == "rotating")
            v.direction = DirectionMode::rotating;
        else if (dir == "random")
            v.direction = DirectionMode::random;
        else
            throw ConfigError("reality.direction", "expected fixed, rotating or random, got '" + dir + "'");
        if (const auto axis = cfg.raw("reality.axis")) {
            std::istringstream is(*axis);
            std::string tok;
            while (is >> tok) v.axis.push_back(parse_double("reality.axis", tok));
        }
        const std::int64_t dim = cfg.get_int("reality.dim", static_cast<std::int64_t>(
                                                                std::max<std::size_t>(v.axis.size(), 2)));
        if (dim < 1) throw ConfigError("reality.dim", "must be >= 1");
        v.dim = static_cast<std::size_t>(dim);
        v.period = cfg.get_int("reality.period", 100);
        spec = v;
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        rethrow_as_config(e);
    }
    return spec;
}

RunConfig build_run_config(const KeyValueConfig& cfg)
{
    RunConfig rc;
    rc.strategy = build_strategy(cfg);
    rc.reality = build_reality(cfg);
    rc.horizon = cfg.get_int("run.horizon", 1000);
    rc.seed = cfg.get_uint("run.seed", 1);
    rc.record_every = cfg.get_int("run.record_every", 1);
    rc.output = cfg.get_string("run.output", "");
    rc.checks = cfg.get_string_list("run.checks");
    if (rc.horizon < 1) throw ConfigError("run.horizon", "must be >= 1");
    if (rc.record_every < 1) throw ConfigError("run.record_every", "must be >= 1");

    static const std::set<std::string> checks = {"consistency", "bound", "overshoot", "one-sided",
                                                 "linear"};
    for (const auto& c : rc.checks)
        if (!checks.contains(c)) throw ConfigError("run.checks", "unknown check '" + c + "'");

    const bool linear = is_vector_strategy(rc.strategy);
    if (!linear && is_vector_reality(rc.reality))
        throw ConfigError("reality.dim", "vector reality needs strategy.kind = linear");
    if (linear) {
        const auto& op = std::get<LinearOperator>(rc.strategy).op;
        if (const auto* v = std::get_if<VectorUnitBall>(&rc.reality)) {
            if (cfg.has("reality.dim") && v->dim != op.dim())
                throw ConfigError("reality.dim", "must equal the matrix dimension " +
                                                     std::to_string(op.dim()));
            auto fixed = *v;
            fixed.dim = op.dim();
            if (!fixed.axis.empty() && fixed.axis.size() != fixed.dim)
                throw ConfigError("reality.axis", "length must equal the matrix dimension");
            rc.reality = fixed;
            try {
                validate(rc.reality);
            } catch (const std::invalid_argument& e) {
                rethrow_as_config(e);
            }
        }
    }
    for (const auto& c : rc.checks) {
        if (c == "bound" && !std::holds_alternative<PastAverage>(rc.strategy))
            throw ConfigError("run.checks", "'bound' needs strategy.kind = past-average");
        if (c == "one-sided" && !std::holds_alternative<OneSided>(rc.strategy))
            throw ConfigError("run.checks", "'one-sided' needs a one-sided strategy");
        if (c == "linear" && !linear) throw ConfigError("run.checks", "'linear' needs strategy.kind = linear");
        if ((c == "one-sided" || c == "overshoot") && rc.record_every != 1)
            throw ConfigError("run.checks", "'" + c + "' needs run.record_every = 1");
        if (c == "overshoot" && linear) throw ConfigError("run.checks", "'overshoot' is scalar only");
    }
    return rc;
}

}  // namespace gtp
