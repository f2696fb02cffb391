#include "tailsum/cli/config.hpp"

#include "tailsum/errors.hpp"
#include "tailsum/perturbative.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace tailsum::cli {

ConfigError::ConfigError(int line, const std::string& key, const std::string& what)
    : std::runtime_error(
          (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
          (key.empty() ? std::string() : "key '" + key + "': ") + what),
      line_(line), key_(key), detail_(what) {}

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& text, const std::string& key, int line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw ConfigError(line, key, "expected a finite number, got '" + text + "'");
    return v;
}

std::uint64_t to_u64(const std::string& text, const std::string& key, int line) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end)
        throw ConfigError(line, key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

int to_int(const std::string& text, const std::string& key, int line) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end)
        throw ConfigError(line, key, "expected an integer, got '" + text + "'");
    return v;
}

void check_keys(const Section& sec, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, entry] : sec)
        if (!allowed.count(key))
            throw ConfigError(entry.line, key, "unknown key in [" + where + "]");
}

const Entry& require(const Section& sec, const std::string& key, const std::string& where,
                     int section_line) {
    const auto it = sec.find(key);
    if (it == sec.end())
        throw ConfigError(section_line, key, "missing in [" + where + "]");
    return it->second;
}

// Runs a model factory and maps library validation errors to config errors.
template <class F>
auto build(const Entry& at, const std::string& key, F&& make) {
    try {
        return make();
    } catch (const tailsum::Error& e) {
        throw ConfigError(at.line, key, e.what());
    }
}

SeverityModel parse_severity(const Section& sec, int line) {
    const auto& kind = require(sec, "kind", "severity", line);
    auto param = [&](const char* key) {
        const auto& e = require(sec, key, "severity", line);
        return std::pair{e, to_double(e.value, key, e.line)};
    };
    if (kind.value == "levy") {
        check_keys(sec, {"kind", "c"}, "severity");
        const auto [e, v] = param("c");
        return build(e, "c", [&] { return SeverityModel::levy(v); });
    }
    if (kind.value == "lognormal") {
        check_keys(sec, {"kind", "sigma"}, "severity");
        const auto [e, v] = param("sigma");
        return build(e, "sigma", [&] { return SeverityModel::lognormal(v); });
    }
    if (kind.value == "pareto") {
        check_keys(sec, {"kind", "a"}, "severity");
        const auto [e, v] = param("a");
        return build(e, "a", [&] { return SeverityModel::pareto(v); });
    }
    throw ConfigError(kind.line, "kind", "unknown severity kind '" + kind.value + "'");
}

FrequencyModel parse_frequency(const Section& sec, int line) {
    const auto& kind = require(sec, "kind", "frequency", line);
    if (kind.value == "deterministic") {
        check_keys(sec, {"kind", "n"}, "frequency");
        const auto& e = require(sec, "n", "frequency", line);
        const int n = to_int(e.value, "n", e.line);
        return build(e, "n", [&] { return FrequencyModel::deterministic(n); });
    }
    if (kind.value == "poisson") {
        check_keys(sec, {"kind", "lambda"}, "frequency");
        const auto& e = require(sec, "lambda", "frequency", line);
        const double v = to_double(e.value, "lambda", e.line);
        return build(e, "lambda", [&] { return FrequencyModel::poisson(v); });
    }
    if (kind.value == "negbin") {
        check_keys(sec, {"kind", "p", "r"}, "frequency");
        const auto& ep = require(sec, "p", "frequency", line);
        const auto& er = require(sec, "r", "frequency", line);
        const double p = to_double(ep.value, "p", ep.line);
        const double r = to_double(er.value, "r", er.line);
        return build(ep, "p", [&] { return FrequencyModel::negative_binomial(p, r); });
    }
    if (kind.value == "generic") {
        check_keys(sec, {"kind", "pmf"}, "frequency");
        const auto& e = require(sec, "pmf", "frequency", line);
        std::vector<double> pmf;
        for (const auto& item : split_list(e.value))
            pmf.push_back(to_double(item, "pmf", e.line));
        return build(e, "pmf", [&] { return FrequencyModel::generic(pmf); });
    }
    throw ConfigError(kind.line, "kind", "unknown frequency kind '" + kind.value + "'");
}

void parse_run(const Section& sec, RunConfig& cfg) {
    check_keys(sec, {"alphas", "orders", "methods"}, "run");
    if (const auto it = sec.find("alphas"); it != sec.end()) {
        for (const auto& item : split_list(it->second.value)) {
            const double a = to_double(item, "alphas", it->second.line);
            if (!(a > 0.0 && a < 1.0))
                throw ConfigError(it->second.line, "alphas", "levels must lie in (0, 1)");
            cfg.alphas.push_back(a);
        }
    }
    if (const auto it = sec.find("orders"); it != sec.end()) {
        cfg.orders.clear();
        for (const auto& item : split_list(it->second.value)) {
            const int k = to_int(item, "orders", it->second.line);
            if (k < 0 || k > max_order)
                throw ConfigError(it->second.line, "orders",
                                  "orders must lie in 0.." + std::to_string(max_order));
            cfg.orders.push_back(k);
        }
    }
    if (const auto it = sec.find("methods"); it != sec.end()) {
        for (const auto& item : split_list(it->second.value)) {
            try {
                const MethodId id = parse_method(item);
                cfg.methods.push_back({id, id.method == Method::pert && item != "PERT"});
            } catch (const tailsum::Error& e) {
                throw ConfigError(it->second.line, "methods", e.what());
            }
        }
    } else {
        cfg.methods.push_back({{Method::pert, default_order}, false});
    }
}

McSpec parse_mc(const Section& sec) {
    check_keys(sec, {"n_samples", "seed", "chunks"}, "mc");
    McSpec mc;
    if (const auto it = sec.find("n_samples"); it != sec.end()) {
        mc.n_samples = to_u64(it->second.value, "n_samples", it->second.line);
        if (mc.n_samples == 0)
            throw ConfigError(it->second.line, "n_samples", "must be positive");
    }
    if (const auto it = sec.find("seed"); it != sec.end())
        mc.seed = to_u64(it->second.value, "seed", it->second.line);
    if (const auto it = sec.find("chunks"); it != sec.end()) {
        const auto c = to_u64(it->second.value, "chunks", it->second.line);
        if (c == 0 || c > 1'000'000)
            throw ConfigError(it->second.line, "chunks", "must lie in 1..1000000");
        mc.chunks = static_cast<unsigned>(c);
    }
    return mc;
}

SweepAxis parse_axis(const Entry& e) {
    static const std::map<std::string, SweepAxis> axes{{"alpha", SweepAxis::alpha},
                                                       {"sigma", SweepAxis::sigma},
                                                       {"a", SweepAxis::a},
                                                       {"lambda", SweepAxis::lambda},
                                                       {"order", SweepAxis::order}};
    const auto it = axes.find(e.value);
    if (it == axes.end())
        throw ConfigError(e.line, "axis", "unknown sweep axis '" + e.value + "'");
    return it->second;
}

} // namespace

std::string axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::alpha:
        return "alpha";
    case SweepAxis::sigma:
        return "sigma";
    case SweepAxis::a:
        return "a";
    case SweepAxis::lambda:
        return "lambda";
    case SweepAxis::order:
        return "order";
    }
    return "unknown";
}

RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, double value) {
    RunConfig cfg = base;
    auto fail = [&](const std::string& what) { return ConfigError(0, "values", what); };
    try {
        switch (axis) {
        case SweepAxis::alpha:
            if (!(value > 0.0 && value < 1.0))
                throw fail("alpha values must lie in (0, 1)");
            cfg.alphas = {value};
            break;
        case SweepAxis::order:
            if (value != std::floor(value) || value < 0 || value > max_order)
                throw fail("order values must be integers in 0.." + std::to_string(max_order));
            cfg.orders = {static_cast<int>(value)};
            break;
        case SweepAxis::sigma:
            if (base.severity.kind() != SeverityKind::lognormal)
                throw fail("sigma axis requires a lognormal severity");
            cfg.severity = SeverityModel::lognormal(value);
            break;
        case SweepAxis::a:
            if (base.severity.kind() != SeverityKind::pareto)
                throw fail("a axis requires a pareto severity");
            cfg.severity = SeverityModel::pareto(value);
            break;
        case SweepAxis::lambda:
            if (base.frequency.kind() == FrequencyKind::poisson) {
                cfg.frequency = FrequencyModel::poisson(value);
            } else if (base.frequency.kind() == FrequencyKind::deterministic) {
                if (value != std::floor(value) || value < 1 || value > 1e9)
                    throw fail("lambda axis with deterministic frequency needs integer counts");
                cfg.frequency = FrequencyModel::deterministic(static_cast<int>(value));
            } else {
                throw fail("lambda axis requires poisson or deterministic frequency");
            }
            break;
        }
    } catch (const tailsum::Error& e) {
        throw fail(e.what());
    }
    return cfg;
}

RunConfig parse_config(std::istream& in) {
    static const std::set<std::string> known{"severity", "frequency", "run", "mc", "sweep", "output"};
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_line;
    std::string current;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ConfigError(line, "", "malformed section header");
            current = trim(text.substr(1, text.size() - 2));
            if (!known.count(current))
                throw ConfigError(line, "", "unknown section [" + current + "]");
            if (section_line.count(current))
                throw ConfigError(line, "", "duplicate section [" + current + "]");
            section_line[current] = line;
            sections[current];
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "", "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line, "", "empty key");
        if (current.empty())
            throw ConfigError(line, key, "key outside of any section");
        auto& sec = sections[current];
        if (sec.count(key))
            throw ConfigError(line, key, "duplicate key in [" + current + "]");
        sec[key] = {value, line};
    }

    RunConfig cfg;
    if (!sections.count("severity"))
        throw ConfigError(0, "", "missing section [severity]");
    cfg.severity = parse_severity(sections["severity"], section_line["severity"]);
    if (!sections.count("frequency"))
        throw ConfigError(0, "", "missing section [frequency]");
    cfg.frequency = parse_frequency(sections["frequency"], section_line["frequency"]);
    if (sections.count("run"))
        parse_run(sections["run"], cfg);
    else
        cfg.methods.push_back({{Method::pert, default_order}, false});
    if (sections.count("mc"))
        cfg.mc = parse_mc(sections["mc"]);
    if (sections.count("output")) {
        const auto& sec = sections["output"];
        check_keys(sec, {"path"}, "output");
        if (const auto it = sec.find("path"); it != sec.end())
            cfg.output = it->second.value;
    }
    if (sections.count("sweep")) {
        const auto& sec = sections["sweep"];
        const int sl = section_line["sweep"];
        check_keys(sec, {"axis", "values"}, "sweep");
        SweepSpec sweep;
        sweep.axis = parse_axis(require(sec, "axis", "sweep", sl));
        const auto& ev = require(sec, "values", "sweep", sl);
        for (const auto& item : split_list(ev.value))
            sweep.values.push_back(to_double(item, "values", ev.line));
        if (sweep.values.empty())
            throw ConfigError(ev.line, "values", "sweep grid is empty");
        for (double v : sweep.values) {
            try {
                (void)apply_sweep_value(cfg, sweep.axis, v);
            } catch (const ConfigError& e) {
                throw ConfigError(ev.line, "values", e.detail());
            }
        }
        cfg.sweep = sweep;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace tailsum::cli
