#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cvwit/error.hpp"

namespace cvwit::cli {
namespace {

const KeySpec* find_key(const std::string& name) {
    for (const auto& k : config_keys())
        if (name == k.name) return &k;
    return nullptr;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        if (!std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("'" + text + "' is not a finite number (" + what + ")");
    }
}

long long parse_integer(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("'" + text + "' is not an integer (" + what + ")");
    }
}

bool is_finite_number(const Json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

void check_axis(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("scan axis must be an object {param, min, max, steps}");
    for (const auto& [k, v] : j.items())
        if (k != "param" && k != "min" && k != "max" && k != "steps")
            throw InvalidArgument("unknown scan axis key '" + k + "'");
    if (!j.contains("param") || !j["param"].is_string()) throw InvalidArgument("scan axis needs a string 'param'");
    if (!j.contains("min") || !is_finite_number(j["min"])) throw InvalidArgument("scan axis needs a numeric 'min'");
    if (!j.contains("max") || !is_finite_number(j["max"])) throw InvalidArgument("scan axis needs a numeric 'max'");
    if (!j.contains("steps") || !j["steps"].is_number_integer() || j["steps"].get<long long>() < 1)
        throw InvalidArgument("scan axis needs an integer 'steps' >= 1");
}

// Normalises a JSON value for key `spec` into its canonical stored form.
Json normalise(const KeySpec& spec, const Json& v) {
    const std::string name = spec.name;
    switch (spec.kind) {
        case KeyKind::Number:
            if (!is_finite_number(v)) throw InvalidArgument("'" + name + "' must be a finite number");
            return v.get<double>();
        case KeyKind::Integer:
            if (!v.is_number_integer()) throw InvalidArgument("'" + name + "' must be an integer");
            return v.get<long long>();
        case KeyKind::String:
            if (!v.is_string()) throw InvalidArgument("'" + name + "' must be a string");
            return v;
        case KeyKind::Complex:
            if (is_finite_number(v)) return Json::array({v.get<double>(), 0.0});
            if (v.is_array() && v.size() == 2 && is_finite_number(v[0]) && is_finite_number(v[1]))
                return Json::array({v[0].get<double>(), v[1].get<double>()});
            throw InvalidArgument("'" + name + "' must be a number or a [re, im] pair");
        case KeyKind::Spec: {
            std::string text;
            if (v.is_string()) {
                text = v.get<std::string>();
            } else if (v.is_array() && v.size() == 4 && std::all_of(v.begin(), v.end(), [](const Json& x) {
                           return x.is_number_integer();
                       })) {
                text = std::to_string(v[0].get<int>()) + "," + std::to_string(v[1].get<int>()) + "," +
                       std::to_string(v[2].get<int>()) + "," + std::to_string(v[3].get<int>());
            } else {
                throw InvalidArgument("'spec' must be \"m,n,p,q\" or [m, n, p, q]");
            }
            return parse_spec(text).str();
        }
        case KeyKind::Axis:
            check_axis(v);
            return Json{{"param", v["param"]},
                        {"min", v["min"].get<double>()},
                        {"max", v["max"].get<double>()},
                        {"steps", v["steps"].get<long long>()}};
        case KeyKind::StringList:
            if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_string(); }))
                throw InvalidArgument("'" + name + "' must be a list of strings");
            return v;
    }
    return v;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
    static const std::vector<KeySpec> keys = {
        {"family", KeyKind::String, "state family: tmsv | cat | noon | coherent | hg"},
        {"lambda", KeyKind::Number, "TMSV squeezing parameter, |lambda| < 1"},
        {"disp_a", KeyKind::Complex, "TMSV displacement of mode a (re or re,im)"},
        {"disp_b", KeyKind::Complex, "TMSV displacement of mode b (re or re,im)"},
        {"alpha", KeyKind::Complex, "cat amplitude alpha or NOON coefficient alpha"},
        {"beta", KeyKind::Complex, "cat amplitude beta (default alpha) or NOON coefficient beta (default sqrt(1-|alpha|^2))"},
        {"theta", KeyKind::Number, "cat relative phase (default pi)"},
        {"N", KeyKind::Integer, "NOON photon number"},
        {"gamma", KeyKind::Complex, "coherent product amplitude of mode a"},
        {"delta", KeyKind::Complex, "coherent product amplitude of mode b"},
        {"sigma_plus", KeyKind::Number, "Hermite-Gaussian width sigma_+"},
        {"sigma_minus", KeyKind::Number, "Hermite-Gaussian width sigma_-"},
        {"pm_phi", KeyKind::Number, "rotation of the (r+-, s-+) variables (Hermite-Gaussian)"},
        {"pm_xi", KeyKind::Number, "squeezing of the (r+-, s-+) variables, >= 1 (Hermite-Gaussian)"},
        {"pm_orientation", KeyKind::String, "squeezing orientation: x | p"},
        {"dephasing", KeyKind::Number, "dephasing p in [0, 1] (NOON and cat)"},
        {"spec", KeyKind::Spec, "minor indices m,n,p,q"},
        {"reference", KeyKind::String, "replica | optimal | coherent"},
        {"ref_gamma", KeyKind::Complex, "coherent reference amplitude of mode a"},
        {"ref_delta", KeyKind::Complex, "coherent reference amplitude of mode b"},
        {"eta1", KeyKind::Number, "efficiency applied to the first summand of the lossy minor"},
        {"eta2", KeyKind::Number, "efficiency applied to the second summand of the lossy minor"},
        {"method", KeyKind::String, "fock | analytic | fourier | shots"},
        {"scan_x", KeyKind::Axis, "first scan axis param:min:max:steps"},
        {"scan_y", KeyKind::Axis, "second scan axis param:min:max:steps"},
        {"criteria", KeyKind::StringList, "scan columns: d, dprime, d_lossy, mgvt, second_moment (optionally @mnpq or @m:n:p:q)"},
        {"max_points", KeyKind::Integer, "largest allowed scan grid"},
        {"shots_per_point", KeyKind::Integer, "shots per phase-grid point"},
        {"shots_marginal", KeyKind::Integer, "shots on each state's photon-number distribution"},
        {"budget", KeyKind::String, "shot budget for coverage runs: fixed | chebyshev | hoeffding"},
        {"target", KeyKind::String, "coverage target: minor | cross"},
        {"trials", KeyKind::Integer, "repeated trials in a coverage run"},
        {"epsilon", KeyKind::Number, "accuracy epsilon"},
        {"fail_prob", KeyKind::Number, "failure probability delta in (0, 1)"},
        {"bound", KeyKind::String, "m0 bound: chebyshev | hoeffding | range | cat-margin | noon-sigma"},
        {"variance", KeyKind::Number, "observable variance for the Chebyshev bound"},
        {"range", KeyKind::Number, "observable range b - a for the range Hoeffding bound"},
        {"k_sigma", KeyKind::Number, "accuracy in units of sigma for the noon-sigma preset"},
        {"seed", KeyKind::Integer, "random seed"},
        {"threads", KeyKind::Integer, "worker threads"},
        {"tail_bound", KeyKind::Number, "truncation tail bound"},
        {"format", KeyKind::String, "output format: csv | json"},
        {"output", KeyKind::String, "output path (stdout when absent)"},
    };
    return keys;
}

RunConfig RunConfig::from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    RunConfig c;
    for (const auto& [k, v] : j.items()) c.set(k, v);
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void RunConfig::set(const std::string& key, const Json& value) {
    const auto* spec = find_key(key);
    if (spec == nullptr) throw InvalidArgument("unknown config key '" + key + "'");
    values_[key] = normalise(*spec, value);
}

void RunConfig::erase(const std::string& key) { values_.erase(key); }

void RunConfig::set_from_string(const std::string& key, const std::string& text) {
    const auto* spec = find_key(key);
    if (spec == nullptr) throw InvalidArgument("unknown config key '" + key + "'");
    switch (spec->kind) {
        case KeyKind::Number: set(key, parse_double(text, key)); break;
        case KeyKind::Integer: set(key, parse_integer(text, key)); break;
        case KeyKind::String: set(key, text); break;
        case KeyKind::Complex: {
            const cplx z = parse_complex(text);
            set(key, Json::array({z.real(), z.imag()}));
            break;
        }
        case KeyKind::Spec: set(key, text); break;
        case KeyKind::Axis: set(key, parse_axis(text)); break;
        case KeyKind::StringList: {
            Json arr = Json::array();
            for (const auto& s : split(text, ','))
                if (!s.empty()) arr.push_back(s);
            set(key, arr);
            break;
        }
    }
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<double> RunConfig::number(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second.get<double>();
}

double RunConfig::number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

long long RunConfig::integer(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.get<long long>();
}

std::string RunConfig::string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.get<std::string>();
}

std::optional<cplx> RunConfig::complex(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return cplx(it->second[0].get<double>(), it->second[1].get<double>());
}

std::optional<MinorSpec> RunConfig::spec() const {
    auto it = values_.find("spec");
    if (it == values_.end()) return std::nullopt;
    return parse_spec(it->second.get<std::string>());
}

std::vector<std::string> RunConfig::string_list(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    return it->second.get<std::vector<std::string>>();
}

std::optional<Json> RunConfig::axis(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

Json RunConfig::echo() const {
    Json out = Json::object();
    for (const auto& k : config_keys()) {
        if (std::string_view(k.name) == "output" || std::string_view(k.name) == "threads") continue;
        auto it = values_.find(k.name);
        if (it != values_.end()) out[k.name] = it->second;
    }
    return out;
}

MinorSpec parse_spec(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw InvalidArgument("spec '" + text + "' must have the form m,n,p,q");
    MinorSpec s{static_cast<int>(parse_integer(parts[0], "spec")), static_cast<int>(parse_integer(parts[1], "spec")),
                static_cast<int>(parse_integer(parts[2], "spec")), static_cast<int>(parse_integer(parts[3], "spec"))};
    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        // A common slip is writing (0,N,0,N) for the NOON minor (0,0,N,N).
        const MinorSpec swapped{s.m, s.p, s.n, s.q};
        std::string hint;
        if (((swapped.m == 0) != (swapped.p == 0)) && ((swapped.n == 0) != (swapped.q == 0)))
            hint = "; did you mean " + swapped.str() + "?";
        throw InvalidArgument(std::string(e.what()) + hint);
    }
    return s;
}

cplx parse_complex(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_double(parts[0], "complex value"), 0.0};
    if (parts.size() == 2) return {parse_double(parts[0], "complex value"), parse_double(parts[1], "complex value")};
    throw InvalidArgument("'" + text + "' must be 're' or 're,im'");
}

Json parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) throw InvalidArgument("scan axis '" + text + "' must be param:min:max:steps");
    return Json{{"param", parts[0]},
                {"min", parse_double(parts[1], "scan min")},
                {"max", parse_double(parts[2], "scan max")},
                {"steps", parse_integer(parts[3], "scan steps")}};
}

}  // namespace cvwit::cli
