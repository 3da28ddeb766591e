#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "cli/output.hpp"
#include "cvwit/error.hpp"
#include "cvwit/sampling.hpp"
#include "cvwit/witness.hpp"

namespace cvwit::cli {
namespace {

constexpr long long kDefaultMaxPoints = 10000;

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json meta_json(const Metadata& md) {
    Json out = Json::object();
    for (const auto& [k, v] : md) std::visit([&, &key = k](const auto& x) { out[key] = x; }, v);
    return out;
}

Json tolerances(const RunConfig& c) {
    return Json{{"tail_bound", c.number("tail_bound", kDefaultTailBound)},
                {"max_norm_defect", 1e-6},
                {"band_tolerance", 1e-9}};
}

// Fields every record starts with.
Json header(const std::string& command, const RunConfig& c) {
    return Json{{"tool", kToolName},
                {"version", kToolVersion},
                {"command", command},
                {"config", c.echo()},
                {"seed", c.integer("seed", 0)},
                {"tolerances", tolerances(c)}};
}

BuildOptions build_options(const RunConfig& c) {
    BuildOptions o;
    o.tail_bound = c.number("tail_bound", kDefaultTailBound);
    if (!(o.tail_bound > 0.0 && o.tail_bound < 1.0)) throw InvalidArgument("tail_bound must lie in (0, 1)");
    return o;
}

std::string require_string(const RunConfig& c, const std::string& key, const std::vector<std::string>& allowed,
                           const std::string& fallback) {
    const auto v = c.string(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw InvalidArgument("'" + key + "' must be one of: " + list + " (got '" + v + "')");
    }
    return v;
}

MinorSpec require_spec(const RunConfig& c) {
    auto s = c.spec();
    if (!s) throw InvalidArgument("a minor spec is required (--spec m,n,p,q)");
    return *s;
}

std::uint64_t seed_of(const RunConfig& c) {
    const auto s = c.integer("seed", 0);
    if (s < 0) throw InvalidArgument("seed must be >= 0");
    return static_cast<std::uint64_t>(s);
}

int threads_of(const RunConfig& c) {
    const auto t = c.integer("threads", 1);
    if (t < 1 || t > 1024) throw InvalidArgument("threads must lie in [1, 1024]");
    return static_cast<int>(t);
}

std::string render(const RunConfig& c, const std::string& default_format, const Json& doc,
                   const std::vector<std::string>& csv_header, const std::vector<Json>& csv_rows) {
    const auto fmt = require_string(c, "format", {"csv", "json"}, default_format);
    std::ostringstream os;
    if (fmt == "json")
        write_json(os, doc);
    else
        write_csv(os, csv_header, csv_rows);
    return os.str();
}

// Columns appended to every CSV row so each row is a self-describing record.
void add_record_columns(Json& row, const RunConfig& c) {
    row["version"] = kToolVersion;
    row["seed"] = c.integer("seed", 0);
    row["tail_bound"] = c.number("tail_bound", kDefaultTailBound);
    row["config"] = c.echo().dump();
}

const std::vector<std::string> kRecordColumns = {"version", "seed", "tail_bound", "config"};

// ---------------------------------------------------------------------------
// minor evaluation shared by witness and scan

enum class MinorKind { D, DPrime, DLossy };

struct Evaluation {
    WitnessResult result;
    std::optional<CoherentProduct> reference;
    std::optional<OptimalReference> optimal;
    std::optional<int> cutoff;
};

// Lazily built state of one configuration.
class PointState {
public:
    explicit PointState(const RunConfig& c) : config_(c), family_(family_from_config(c)) {}

    const StateFamily& family() const { return family_; }
    const TruncatedState& state() {
        if (!state_) state_ = build(family_, build_options(config_));
        return *state_;
    }
    const RunConfig& config() const { return config_; }

private:
    const RunConfig& config_;
    StateFamily family_;
    std::optional<TruncatedState> state_;
};

std::string method_of(const RunConfig& c) {
    return require_string(c, "method", {"fock", "analytic", "fourier", "shots"}, "fock");
}

std::optional<CoherentProduct> given_reference(const RunConfig& c) {
    return CoherentProduct{c.complex("ref_gamma").value_or(0.0), c.complex("ref_delta").value_or(0.0)};
}

Evaluation evaluate(PointState& ps, const MinorSpec& spec, MinorKind kind) {
    const RunConfig& c = ps.config();
    const auto method = method_of(c);
    const auto reference = require_string(c, "reference", {"replica", "optimal", "coherent"}, "replica");
    Evaluation ev;

    if (kind == MinorKind::DLossy) {
        const double eta1 = c.number("eta1", 1.0), eta2 = c.number("eta2", 1.0);
        if (method == "analytic") {
            ev.result = assemble_d_lossy(analytic_minor_moments(ps.family(), spec), spec.order(), eta1, eta2,
                                         Provenance::Analytic);
            ev.result.metadata.emplace_back("spec", spec.str());
            ev.result.metadata.emplace_back("eta1", eta1);
            ev.result.metadata.emplace_back("eta2", eta2);
        } else if (method == "fock") {
            ev.result = minor_d_lossy(ps.state(), spec, eta1, eta2);
            ev.cutoff = ps.state().cutoff();
        } else {
            throw Unsupported("the lossy minor is evaluated with method fock or analytic");
        }
        return ev;
    }

    const bool replica = (kind == MinorKind::D) || reference == "replica";
    if (!replica) {
        if (reference == "coherent") {
            ev.reference = given_reference(c);
        } else {
            const cplx target = (method == "analytic") ? analytic_minor_moments(ps.family(), spec).cross
                                                       : expectation(ps.state(), spec.cross_monomial());
            ev.optimal = optimal_reference(target, spec);
            ev.reference = ev.optimal->reference;
        }
    }

    if (method == "analytic") {
        ev.result = analytic_minor(ps.family(), spec, ev.reference);
        return ev;
    }
    const auto& s1 = ps.state();
    ev.cutoff = s1.cutoff();
    if (method == "fock") {
        ev.result = replica ? minor_d(s1, spec) : minor_dprime(s1, build({*ev.reference}, build_options(c)), spec);
        return ev;
    }
    EstimateOptions eo;
    eo.exact = (method == "fourier");
    eo.seed = seed_of(c);
    eo.shots_per_point = c.integer("shots_per_point", 1000);
    eo.shots_marginal = c.integer("shots_marginal", eo.shots_per_point);
    if (!eo.exact && (eo.shots_per_point < 1 || eo.shots_marginal < 1))
        throw InvalidArgument("shot counts must be >= 1");
    if (replica) {
        ev.result = estimate_minor(s1, s1, spec, eo);
    } else {
        ev.result = estimate_minor(s1, build({*ev.reference}, build_options(c)), spec, eo);
    }
    return ev;
}

Json result_json(const Evaluation& ev) {
    const auto& r = ev.result;
    Json j{{"value", r.value},
           {"first", r.first},
           {"second", r.second},
           {"epsilon_term", r.epsilon_term ? Json(*r.epsilon_term) : Json(nullptr)},
           {"witnessed", r.witnessed()},
           {"sound", r.sound},
           {"provenance", provenance_name(r.provenance)},
           {"metadata", meta_json(r.metadata)}};
    return j;
}

Json reference_json(const Evaluation& ev) {
    if (!ev.reference) return Json{{"kind", "replica"}};
    Json j{{"kind", ev.optimal ? "optimal" : "coherent"},
           {"gamma", complex_json(ev.reference->gamma)},
           {"delta", complex_json(ev.reference->delta)}};
    if (ev.optimal) {
        j["target_moment"] = complex_json(ev.optimal->target);
        j["degenerate"] = ev.optimal->degenerate;
        j["no_solution"] = ev.optimal->no_solution;
    }
    return j;
}

MinorKind kind_from_config(const RunConfig& c) {
    const auto reference = require_string(c, "reference", {"replica", "optimal", "coherent"}, "replica");
    if (c.has("eta1") || c.has("eta2")) {
        if (reference != "replica")
            throw InvalidArgument("the lossy minor (eta1, eta2) is defined with the replica reference only");
        return MinorKind::DLossy;
    }
    return reference == "replica" ? MinorKind::D : MinorKind::DPrime;
}

// ---------------------------------------------------------------------------
// witness

std::string cmd_witness(const RunConfig& c) {
    const auto spec = require_spec(c);
    PointState ps(c);
    const auto ev = evaluate(ps, spec, kind_from_config(c));

    Json doc = header("witness", c);
    doc["family"] = family_name(ps.family().tag);
    doc["cutoff"] = ev.cutoff ? Json(*ev.cutoff) : Json(nullptr);
    doc["reference"] = reference_json(ev);
    doc["result"] = result_json(ev);

    Json row{{"family", family_name(ps.family().tag)},
             {"spec", spec.str()},
             {"value", ev.result.value},
             {"first", ev.result.first},
             {"second", ev.result.second},
             {"epsilon_term", ev.result.epsilon_term ? Json(*ev.result.epsilon_term) : Json(nullptr)},
             {"witnessed", ev.result.witnessed()},
             {"sound", ev.result.sound},
             {"provenance", provenance_name(ev.result.provenance)},
             {"reference", doc["reference"].dump()},
             {"cutoff", doc["cutoff"]}};
    add_record_columns(row, c);
    std::vector<std::string> cols = {"family", "spec", "value", "first", "second", "epsilon_term", "witnessed",
                                     "sound", "provenance", "reference", "cutoff"};
    cols.insert(cols.end(), kRecordColumns.begin(), kRecordColumns.end());
    return render(c, "json", doc, cols, {row});
}

// ---------------------------------------------------------------------------
// scan

struct Criterion {
    std::string name;  // d | dprime | d_lossy | mgvt | second_moment
    std::optional<MinorSpec> spec;
    std::string column;
};

std::vector<Criterion> parse_criteria(const RunConfig& c) {
    auto items = c.string_list("criteria");
    if (items.empty()) {
        const auto kind = kind_from_config(c);
        items = {kind == MinorKind::D ? "d" : kind == MinorKind::DPrime ? "dprime" : "d_lossy"};
    }
    std::vector<Criterion> out;
    for (const auto& item : items) {
        Criterion cr;
        const auto at = item.find('@');
        cr.name = item.substr(0, at);
        if (cr.name != "d" && cr.name != "dprime" && cr.name != "d_lossy" && cr.name != "mgvt" &&
            cr.name != "second_moment")
            throw InvalidArgument("unknown criterion '" + cr.name +
                                  "' (expected d, dprime, d_lossy, mgvt or second_moment)");
        cr.column = cr.name;
        if (at != std::string::npos) {
            if (cr.name == "mgvt" || cr.name == "second_moment")
                throw InvalidArgument("criterion '" + cr.name + "' takes no minor spec");
            // Inside the comma-separated list a spec is written as 1001 or 1:0:0:1.
            std::string text = item.substr(at + 1);
            std::replace(text.begin(), text.end(), ':', ',');
            if (text.size() == 4 && std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
                text = std::string{text[0], ',', text[1], ',', text[2], ',', text[3]};
            cr.spec = parse_spec(text);
            const auto& s = *cr.spec;
            cr.column += "_" + std::to_string(s.m) + std::to_string(s.n) + std::to_string(s.p) + std::to_string(s.q);
        } else if (cr.name != "mgvt" && cr.name != "second_moment") {
            cr.spec = require_spec(c);
        }
        if (cr.name == "dprime" && c.string("reference", "replica") == "replica")
            throw InvalidArgument("criterion dprime needs --reference optimal or coherent");
        out.push_back(cr);
    }
    return out;
}

std::vector<std::string> criterion_columns(const Criterion& cr) {
    if (cr.name == "mgvt" || cr.name == "second_moment")
        return {cr.column + "_plus", cr.column + "_plus_witnessed", cr.column + "_minus",
                cr.column + "_minus_witnessed"};
    if (cr.name == "d_lossy") return {cr.column, cr.column + "_witnessed", cr.column + "_sound"};
    return {cr.column, cr.column + "_witnessed"};
}

Covariance4 covariance_of(PointState& ps) {
    if (method_of(ps.config()) == "analytic") return covariance_matrix(ps.family());
    return quadrature_covariance(ps.state());
}

Json scan_point(const RunConfig& base, const std::vector<std::pair<std::string, double>>& coords,
                const std::vector<Criterion>& criteria) {
    RunConfig c = base;
    for (const auto& [param, value] : coords) apply_scan_param(c, param, value);
    PointState ps(c);
    Json row = Json::object();
    std::optional<int> cutoff;
    for (const auto& cr : criteria) {
        if (cr.name == "mgvt" || cr.name == "second_moment") {
            const auto cov = covariance_of(ps);
            if (method_of(c) != "analytic") cutoff = ps.state().cutoff();
            for (const auto branch : {Branch::Plus, Branch::Minus}) {
                const std::string suffix = branch == Branch::Plus ? "_plus" : "_minus";
                const double v = cr.name == "mgvt" ? mgvt(cov, branch) : second_moment_criterion(cov, branch);
                row[cr.column + suffix] = v;
                row[cr.column + suffix + "_witnessed"] = cr.name == "mgvt" ? v < 1.0 : v < 0.0;
            }
            continue;
        }
        const MinorKind kind = cr.name == "d" ? MinorKind::D : cr.name == "dprime" ? MinorKind::DPrime : MinorKind::DLossy;
        const auto ev = evaluate(ps, *cr.spec, kind);
        if (ev.cutoff) cutoff = ev.cutoff;
        row[cr.column] = ev.result.value;
        row[cr.column + "_witnessed"] = ev.result.witnessed();
        if (kind == MinorKind::DLossy) row[cr.column + "_sound"] = ev.result.sound;
    }
    row["cutoff"] = cutoff ? Json(*cutoff) : Json(nullptr);
    return row;
}

std::string cmd_scan(const RunConfig& c) {
    const auto ax = c.axis("scan_x");
    if (!ax) throw InvalidArgument("scan needs at least --scan-x param:min:max:steps");
    const auto ay = c.axis("scan_y");
    const auto xs = axis_values(*ax);
    const auto ys = ay ? axis_values(*ay) : std::vector<double>{};
    const std::string px = (*ax)["param"].get<std::string>();
    const std::string py = ay ? (*ay)["param"].get<std::string>() : "";
    if (ay && px == py) throw InvalidArgument("the two scan axes must differ");
    const long long cap = c.integer("max_points", kDefaultMaxPoints);
    const long long npoints = static_cast<long long>(xs.size()) * static_cast<long long>(ay ? ys.size() : 1);
    if (npoints > cap)
        throw InvalidArgument("scan grid has " + std::to_string(npoints) + " points, above max_points = " +
                              std::to_string(cap));
    const auto criteria = parse_criteria(c);
    // Validate a representative point before spending time on the grid.
    {
        RunConfig probe = c;
        apply_scan_param(probe, px, xs.front());
        if (ay) apply_scan_param(probe, py, ys.front());
        (void)family_from_config(probe);
    }

    const std::size_t n = static_cast<std::size_t>(npoints);
    std::vector<Json> rows(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads_of(c)));
    const auto worker = [&](std::size_t w) {
        try {
            for (std::size_t i = next++; i < n; i = next++) {
                const std::size_t ix = ay ? i / ys.size() : i;
                std::vector<std::pair<std::string, double>> coords{{px, xs[ix]}};
                if (ay) coords.emplace_back(py, ys[i % ys.size()]);
                Json point = scan_point(c, coords, criteria);
                Json row{{"index", static_cast<long long>(i)}, {px, xs[ix]}};
                if (ay) row[py] = ys[i % ys.size()];
                for (auto& [k, v] : point.items()) row[k] = v;
                rows[i] = std::move(row);
            }
        } catch (...) {
            errors[w] = std::current_exception();
            next = n;
        }
    };
    if (errors.size() == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < errors.size(); ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<std::string> cols = {"index", px};
    if (ay) cols.push_back(py);
    for (const auto& cr : criteria)
        for (auto& col : criterion_columns(cr)) cols.push_back(col);
    cols.push_back("cutoff");

    Json doc = header("scan", c);
    doc["family"] = c.string("family", "");
    doc["columns"] = cols;
    doc["rows"] = rows;

    std::vector<Json> csv_rows = rows;
    for (auto& r : csv_rows) add_record_columns(r, c);
    cols.insert(cols.end(), kRecordColumns.begin(), kRecordColumns.end());
    return render(c, "csv", doc, cols, csv_rows);
}

// ---------------------------------------------------------------------------
// shots

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string cmd_shots(const RunConfig& c) {
    const auto spec = require_spec(c);
    const auto reference = require_string(c, "reference", {"replica", "optimal", "coherent"}, "replica");
    const auto budget = require_string(c, "budget", {"fixed", "chebyshev", "hoeffding"}, "fixed");
    const auto target = require_string(c, "target", {"minor", "cross"}, "minor");
    const double eps = c.number("epsilon", 0.1);
    const double fail = c.number("fail_prob", 0.1);
    if (!(eps > 0.0)) throw InvalidArgument("epsilon must be > 0");
    if (!(fail > 0.0 && fail < 1.0)) throw InvalidArgument("fail_prob must lie in (0, 1)");
    const auto trials = c.integer("trials", 200);
    if (trials < 1 || trials > 1000000) throw InvalidArgument("trials must lie in [1, 1e6]");

    PointState ps(c);
    const auto& s1 = ps.state();
    std::optional<TruncatedState> s2;
    Json ref_json{{"kind", "replica"}};
    if (reference != "replica") {
        CoherentProduct ref = *given_reference(c);
        if (reference == "optimal") {
            const auto opt = optimal_reference(s1, spec);
            ref = opt.reference;
        }
        s2 = build({ref}, build_options(c));
        ref_json = Json{{"kind", reference}, {"gamma", complex_json(ref.gamma)}, {"delta", complex_json(ref.delta)}};
    }
    const TruncatedState& second = s2 ? *s2 : s1;

    CoverageConfig cc;
    cc.trials = static_cast<int>(trials);
    cc.epsilon = eps;
    cc.seed = seed_of(c);
    cc.cross_term_only = (target == "cross");
    cc.threads = threads_of(c);
    Json budget_json{{"kind", budget}};
    if (budget == "fixed") {
        cc.shots_per_point = c.integer("shots_per_point", 1000);
        cc.shots_marginal = c.integer("shots_marginal", cc.shots_per_point);
    } else if (budget == "chebyshev") {
        const double var1 = estimator_variance(s1, second, spec, 1, 1, cc.cross_term_only);
        const auto m = m0_chebyshev(var1, eps, fail);
        cc.shots_per_point = cc.shots_marginal = m;
        budget_json["single_shot_variance"] = var1;
        budget_json["m0"] = m;
    } else {
        const auto plan = cross_term_plan(spec);
        const int n = std::max(plan.m_prime, plan.n_prime);
        const auto m = m0_hoeffding(n, eps, fail);
        const auto points = static_cast<std::int64_t>(plan_grid(plan.m_prime, plan.n_prime).points());
        cc.shots_per_point = (m + points - 1) / points;
        cc.shots_marginal = cc.shots_per_point;
        budget_json["N"] = n;
        budget_json["m0"] = m;
        budget_json["grid_points"] = points;
    }
    if (cc.shots_per_point < 1 || cc.shots_marginal < 1) throw InvalidArgument("shot counts must be >= 1");
    budget_json["shots_per_point"] = cc.shots_per_point;
    budget_json["shots_marginal"] = cc.shots_marginal;
    budget_json["epsilon"] = eps;
    budget_json["fail_prob"] = fail;

    const auto res = coverage_experiment(s1, second, spec, cc);
    std::vector<double> est;
    for (const auto& t : res.trials) est.push_back(t.estimate);
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= static_cast<double>(est.size());
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    var = est.size() > 1 ? var / static_cast<double>(est.size() - 1) : 0.0;

    Json doc = header("shots", c);
    doc["family"] = family_name(ps.family().tag);
    doc["cutoff"] = s1.cutoff();
    doc["rng"] = kRngName;
    doc["reference"] = ref_json;
    doc["budget"] = budget_json;
    doc["summary"] = Json{{"target", target},
                          {"exact", res.exact},
                          {"coverage", res.coverage()},
                          {"required_coverage", 1.0 - fail},
                          {"mean", mean},
                          {"std", std::sqrt(var)},
                          {"quantiles",
                           Json{{"min", quantile(est, 0.0)},
                                {"q05", quantile(est, 0.05)},
                                {"q25", quantile(est, 0.25)},
                                {"q50", quantile(est, 0.5)},
                                {"q75", quantile(est, 0.75)},
                                {"q95", quantile(est, 0.95)},
                                {"max", quantile(est, 1.0)}}}};
    Json trials_json = Json::array();
    std::vector<Json> csv_rows;
    for (const auto& t : res.trials) {
        Json row{{"trial", t.index},
                 {"trial_seed", t.seed},
                 {"estimate", t.estimate},
                 {"error", t.error},
                 {"covered", t.covered}};
        trials_json.push_back(row);
        row["exact"] = res.exact;
        row["shots_per_point"] = cc.shots_per_point;
        row["shots_marginal"] = cc.shots_marginal;
        row["cutoff"] = s1.cutoff();
        add_record_columns(row, c);
        csv_rows.push_back(std::move(row));
    }
    doc["trials"] = trials_json;
    std::vector<std::string> cols = {"trial",           "trial_seed",     "estimate", "error", "covered", "exact",
                                     "shots_per_point", "shots_marginal", "cutoff"};
    cols.insert(cols.end(), kRecordColumns.begin(), kRecordColumns.end());
    return render(c, "json", doc, cols, csv_rows);
}

// ---------------------------------------------------------------------------
// m0

std::string cmd_m0(const RunConfig& c) {
    const auto bound = require_string(c, "bound", {"chebyshev", "hoeffding", "range", "cat-margin", "noon-sigma"}, "hoeffding");
    const double fail = c.number("fail_prob", 0.1);
    Json result{{"bound", bound}, {"fail_prob", fail}};
    Json cutoff = nullptr;
    const auto need = [&](const std::string& key) {
        const auto v = c.number(key);
        if (!v) throw InvalidArgument("bound '" + bound + "' needs --" + key);
        return *v;
    };
    if (bound == "chebyshev") {
        const double var = need("variance"), eps = need("epsilon");
        result["variance"] = var;
        result["epsilon"] = eps;
        result["m0"] = m0_chebyshev(var, eps, fail);
    } else if (bound == "hoeffding") {
        if (!c.has("N")) throw InvalidArgument("bound 'hoeffding' needs --N");
        const auto n = c.integer("N", 1);
        const double eps = need("epsilon");
        result["N"] = n;
        result["epsilon"] = eps;
        result["m0"] = m0_hoeffding(static_cast<int>(n), eps, fail);
    } else if (bound == "range") {
        const double range = need("range"), eps = need("epsilon");
        result["range"] = range;
        result["epsilon"] = eps;
        result["m0"] = m0_hoeffding_range(range, eps, fail);
    } else if (bound == "cat-margin") {
        RunConfig cc = c;
        if (!cc.has("family")) cc.set("family", "cat");
        if (cc.string("family", "") != "cat") throw InvalidArgument("the cat-margin preset uses the cat family");
        const auto fam = family_from_config(cc);
        const auto s = build(fam, build_options(cc));
        const MinorSpec spec{1, 1, 0, 0};
        const double d = minor_d(s, spec).value;
        const double var = minor_observable_variance(s, spec);
        const double eps = cat_margin_epsilon(d);
        cutoff = s.cutoff();
        result["d1100"] = d;
        result["variance"] = var;
        result["epsilon"] = eps;
        result["m0"] = m0_chebyshev(var, eps, fail);
    } else {
        if (!c.has("N")) throw InvalidArgument("bound 'noon-sigma' needs --N");
        const auto n = static_cast<int>(c.integer("N", 1));
        const double k = c.number("k_sigma", 1.0);
        if (!(k > 0.0)) throw InvalidArgument("k_sigma must be > 0");
        const double sigma = noon_observable_sigma(n);
        result["N"] = n;
        result["k_sigma"] = k;
        result["sigma"] = sigma;
        result["epsilon"] = k * sigma;
        result["m0"] = m0_hoeffding(n, k * sigma, fail);
        cutoff = n + 1;
    }
    Json doc = header("m0", c);
    doc["cutoff"] = cutoff;
    doc["result"] = result;

    Json row = Json::object();
    std::vector<std::string> cols;
    for (const auto& [k, v] : result.items()) {
        cols.push_back(k);
        row[k] = v;
    }
    row["cutoff"] = cutoff;
    cols.push_back("cutoff");
    add_record_columns(row, c);
    cols.insert(cols.end(), kRecordColumns.begin(), kRecordColumns.end());
    return render(c, "json", doc, cols, {row});
}

}  // namespace

StateFamily family_from_config(const RunConfig& c) {
    if (!c.has("family")) throw InvalidArgument("a state family is required (--family tmsv|cat|noon|coherent|hg)");
    const auto name = require_string(c, "family", {"tmsv", "cat", "noon", "coherent", "hg"}, "");
    StateFamily f;
    f.dephasing = c.number("dephasing", 0.0);
    if (name == "tmsv") {
        f.tag = Tmsv{c.number("lambda", 0.0), c.complex("disp_a").value_or(0.0), c.complex("disp_b").value_or(0.0)};
    } else if (name == "cat") {
        const auto alpha = c.complex("alpha");
        if (!alpha) throw InvalidArgument("the cat family needs --alpha");
        f.tag = Cat{*alpha, c.complex("beta").value_or(*alpha), c.number("theta", std::numbers::pi)};
    } else if (name == "noon") {
        if (!c.has("N")) throw InvalidArgument("the noon family needs --N");
        const auto n = c.integer("N", 1);
        if (n < 1 || n > 60) throw InvalidArgument("N must lie in [1, 60]");
        const cplx alpha = c.complex("alpha").value_or(std::numbers::sqrt2 / 2.0);
        cplx beta;
        if (const auto b = c.complex("beta")) {
            beta = *b;
        } else {
            const double rest = 1.0 - std::norm(alpha);
            if (rest < 0.0) throw InvalidArgument("NOON |alpha| must be <= 1");
            beta = std::sqrt(rest);
        }
        f.tag = Noon{static_cast<int>(n), alpha, beta};
    } else if (name == "coherent") {
        f.tag = CoherentProduct{c.complex("gamma").value_or(0.0), c.complex("delta").value_or(0.0)};
    } else {
        f.tag = HermiteGaussian{c.number("sigma_plus", 1.0), c.number("sigma_minus", 1.0)};
        if (c.has("pm_phi") || c.has("pm_xi") || c.has("pm_orientation")) {
            const auto o = require_string(c, "pm_orientation", {"x", "p"}, "x");
            f.pm_transform = PmTransform{c.number("pm_phi", 0.0), c.number("pm_xi", 1.0),
                                         o == "x" ? SqueezeOrientation::X : SqueezeOrientation::P};
        }
    }
    if (name != "hg" && (c.has("pm_phi") || c.has("pm_xi") || c.has("pm_orientation")))
        throw InvalidArgument("pm_phi, pm_xi and pm_orientation apply to the hg family only");
    validate(f);
    return f;
}

std::vector<double> axis_values(const Json& axis) {
    const double lo = axis["min"].get<double>(), hi = axis["max"].get<double>();
    const auto steps = axis["steps"].get<long long>();
    if (steps < 1) throw InvalidArgument("scan steps must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(steps));
    for (long long i = 0; i < steps; ++i)
    {
        if (steps == 1) {
            v.push_back(lo);
            continue;
        }
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        v.push_back((1.0 - t) * lo + t * hi);
    }
    return v;
}

void apply_scan_param(RunConfig& c, const std::string& param, double value) {
    if (param == "ref_amp") {
        c.set("ref_gamma", value);
        c.set("ref_delta", value);
        return;
    }
    if (param == "ref_product") {
        const double r = std::sqrt(std::abs(value));
        c.set("ref_gamma", r);
        c.set("ref_delta", value < 0.0 ? -r : r);
        return;
    }
    if (param == "eta") {
        c.set("eta1", value);
        c.set("eta2", value);
        return;
    }
    for (const auto& k : config_keys()) {
        if (param != k.name) continue;
        if (k.kind == KeyKind::Number || k.kind == KeyKind::Complex) {
            c.set(param, value);
            return;
        }
        if (k.kind == KeyKind::Integer) {
            if (value != std::round(value)) throw InvalidArgument("scan parameter '" + param + "' must be integral");
            c.set(param, static_cast<long long>(std::llround(value)));
            return;
        }
    }
    throw InvalidArgument("'" + param + "' cannot be scanned (numeric config keys, ref_amp, ref_product, eta)");
}

std::string run_command(const std::string& command, const RunConfig& config) {
    if (command == "witness") return cmd_witness(config);
    if (command == "scan") return cmd_scan(config);
    if (command == "shots") return cmd_shots(config);
    if (command == "m0") return cmd_m0(config);
    throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace cvwit::cli
