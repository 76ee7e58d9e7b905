#include "rwalk/config.hpp"

#include <set>
#include <stdexcept>

#include "rwalk/io.hpp"

namespace rwalk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + " " + what);
}

// Strict object reader: every lookup is remembered and done() rejects keys
// that were never asked for.
class Node {
  public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "must be an object");
    }

    const json* find(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
    const json& require(const char* key) {
        const json* v = find(key);
        if (!v) fail(path_ + "." + key, "is required");
        return *v;
    }

    double num(const char* key, double fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(path_ + "." + key, "must be a number");
        return v->get<double>();
    }
    std::uint64_t uint(const char* key, std::uint64_t fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        // Accept any integral JSON number with a nonnegative value; the
        // storage class (signed vs unsigned) depends on how the document
        // was produced and is not meaningful to callers.
        if (!v->is_number_integer() ||
            (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
            fail(path_ + "." + key, "must be a nonnegative integer");
        }
        return v->get<std::uint64_t>();
    }
    bool boolean(const char* key, bool fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(path_ + "." + key, "must be a boolean");
        return v->get<bool>();
    }
    std::string require_str(const char* key) {
        const json& v = require(key);
        if (!v.is_string()) fail(path_ + "." + key, "must be a string");
        return v.get<std::string>();
    }
    std::vector<double> require_num_array(const char* key) {
        const json& v = require(key);
        if (!v.is_array()) fail(path_ + "." + key, "must be an array");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(path_ + "." + key, "must contain numbers only");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }
    std::vector<std::uint64_t> require_uint_array(const char* key) {
        const json& v = require(key);
        if (!v.is_array()) fail(path_ + "." + key, "must be an array");
        std::vector<std::uint64_t> out;
        out.reserve(v.size());
        for (const auto& e : v) {
            if (!e.is_number_integer() ||
                (!e.is_number_unsigned() && e.get<std::int64_t>() < 0)) {
                fail(path_ + "." + key,
                     "must contain nonnegative integers only");
            }
            out.push_back(e.get<std::uint64_t>());
        }
        return out;
    }

    const std::string& path() const { return path_; }

    void done() {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                fail(path_ + "." + it.key(), "is not a recognized key");
            }
        }
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

StepSchedule schedule_from_json(const json& j, const std::string& path) {
    Node n(j, path);
    std::string type = n.require_str("type");
    StepSchedule out;
    if (type == "power_law") {
        PowerLawSchedule s;
        s.c = n.num("c", s.c);
        s.gamma_exp = n.num("gamma_exp", s.gamma_exp);
        s.offset = n.uint("offset", s.offset);
        s.allow_clamp = n.boolean("allow_clamp", s.allow_clamp);
        out = s;
    } else if (type == "explicit") {
        out = ExplicitSchedule{n.require_num_array("values")};
    } else if (type == "graph") {
        GraphDerivedSchedule s;
        s.lambda = n.num("lambda", s.lambda);
        auto degrees = n.require_uint_array("max_degree");
        s.max_degree.assign(degrees.begin(), degrees.end());
        out = s;
    } else {
        fail(path + ".type",
             "must be one of power_law, explicit, graph");
    }
    n.done();
    return out;
}

json schedule_to_json(const StepSchedule& schedule) {
    json j;
    if (const auto* pl = std::get_if<PowerLawSchedule>(&schedule)) {
        j["type"] = "power_law";
        j["c"] = pl->c;
        j["gamma_exp"] = pl->gamma_exp;
        j["offset"] = pl->offset;
        j["allow_clamp"] = pl->allow_clamp;
    } else if (const auto* ex = std::get_if<ExplicitSchedule>(&schedule)) {
        j["type"] = "explicit";
        j["values"] = ex->values;
    } else {
        const auto& gd = std::get<GraphDerivedSchedule>(schedule);
        j["type"] = "graph";
        j["lambda"] = gd.lambda;
        j["max_degree"] = gd.max_degree;
    }
    return j;
}

InitialLaw initial_from_json(const json& j, const std::string& path) {
    Node n(j, path);
    std::string type = n.require_str("type");
    InitialLaw out;
    if (type == "deterministic") {
        out = DeterministicInitial{n.require_num_array("values")};
    } else if (type == "beta") {
        SymmetricBetaInitial s;
        s.a = n.num("a", s.a);
        out = s;
    } else if (type == "two_point") {
        TwoPointInitial s;
        s.p = n.num("p", s.p);
        s.lo = n.num("lo", s.lo);
        s.hi = n.num("hi", s.hi);
        out = s;
    } else {
        fail(path + ".type",
             "must be one of deterministic, beta, two_point");
    }
    n.done();
    return out;
}

json initial_to_json(const InitialLaw& law) {
    json j;
    if (const auto* det = std::get_if<DeterministicInitial>(&law)) {
        j["type"] = "deterministic";
        j["values"] = det->values;
    } else if (const auto* beta = std::get_if<SymmetricBetaInitial>(&law)) {
        j["type"] = "beta";
        j["a"] = beta->a;
    } else {
        const auto& two = std::get<TwoPointInitial>(law);
        j["type"] = "two_point";
        j["p"] = two.p;
        j["lo"] = two.lo;
        j["hi"] = two.hi;
    }
    return j;
}

RecordingGrid grid_from_json(const json& j, const std::string& path) {
    Node n(j, path);
    std::string type = n.require_str("type");
    RecordingGrid out;
    if (type == "geometric") {
        GeometricGrid g;
        g.base_n = n.uint("base_n", g.base_n);
        g.ratio = n.num("ratio", g.ratio);
        g.count = static_cast<int>(
            n.uint("count", static_cast<std::uint64_t>(g.count)));
        out = g;
    } else if (type == "explicit") {
        out = ExplicitSteps{n.require_uint_array("steps")};
    } else if (type == "time_window") {
        TimeWindow w;
        w.n = n.uint("n", w.n);
        w.gamma_exp = n.num("gamma_exp", w.gamma_exp);
        w.t_grid = n.require_num_array("t_grid");
        out = w;
    } else {
        fail(path + ".type",
             "must be one of geometric, explicit, time_window");
    }
    n.done();
    return out;
}

json grid_to_json(const RecordingGrid& grid) {
    json j;
    if (const auto* g = std::get_if<GeometricGrid>(&grid)) {
        j["type"] = "geometric";
        j["base_n"] = g->base_n;
        j["ratio"] = g->ratio;
        j["count"] = g->count;
    } else if (const auto* ex = std::get_if<ExplicitSteps>(&grid)) {
        j["type"] = "explicit";
        j["steps"] = ex->steps;
    } else {
        const auto& w = std::get<TimeWindow>(grid);
        j["type"] = "time_window";
        j["n"] = w.n;
        j["gamma_exp"] = w.gamma_exp;
        j["t_grid"] = w.t_grid;
    }
    return j;
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    Node root(j, "config");
    RunConfig config;

    {
        Node model(root.require("model"), "config.model");
        config.params.n_walkers = static_cast<int>(model.uint(
            "n_walkers", static_cast<std::uint64_t>(config.params.n_walkers)));
        config.params.rho = model.num("rho", config.params.rho);
        config.params.alpha = model.num("alpha", config.params.alpha);
        config.params.q = model.num("q", config.params.q);
        if (const json* sched = model.find("schedule")) {
            config.params.schedule =
                schedule_from_json(*sched, "config.model.schedule");
        }
        if (const json* init = model.find("initial")) {
            config.params.initial =
                initial_from_json(*init, "config.model.initial");
        }
        model.done();
    }
    if (const json* grid = root.find("grid")) {
        config.grid = grid_from_json(*grid, "config.grid");
    }
    if (const json* ens = root.find("ensemble")) {
        Node e(*ens, "config.ensemble");
        config.options.master_seed =
            e.uint("master_seed", config.options.master_seed);
        config.options.replications = static_cast<std::uint32_t>(e.uint(
            "replications", config.options.replications));
        config.options.threads = static_cast<int>(e.uint(
            "threads", static_cast<std::uint64_t>(config.options.threads)));
        config.options.record_draws =
            e.boolean("record_draws", config.options.record_draws);
        config.options.full_budget =
            e.uint("full_budget", config.options.full_budget);
        config.options.reduced_budget =
            e.uint("reduced_budget", config.options.reduced_budget);
        e.done();
    }
    root.done();

    validate(config.params);
    return config;
}

RunConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("config: ") + err.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const RunConfig& config) {
    json j;
    j["model"]["n_walkers"] = config.params.n_walkers;
    j["model"]["rho"] = config.params.rho;
    j["model"]["alpha"] = config.params.alpha;
    j["model"]["q"] = config.params.q;
    j["model"]["schedule"] = schedule_to_json(config.params.schedule);
    j["model"]["initial"] = initial_to_json(config.params.initial);
    j["grid"] = grid_to_json(config.grid);
    j["ensemble"]["master_seed"] = config.options.master_seed;
    j["ensemble"]["replications"] = config.options.replications;
    j["ensemble"]["threads"] = config.options.threads;
    j["ensemble"]["record_draws"] = config.options.record_draws;
    j["ensemble"]["full_budget"] = config.options.full_budget;
    j["ensemble"]["reduced_budget"] = config.options.reduced_budget;
    return j;
}

std::string config_digest(const RunConfig& config) {
    return fnv1a_hex(config_to_json(config).dump());
}

UrnSpec urn_from_json(const nlohmann::json& j) {
    Node root(j, "urn");
    UrnSpec spec;
    const json& matrix = root.require("base_matrix");
    if (!matrix.is_array() || matrix.size() != 2 || !matrix[0].is_array() ||
        !matrix[1].is_array() || matrix[0].size() != 2 ||
        matrix[1].size() != 2) {
        fail("urn.base_matrix", "must be a 2x2 array");
    }
    for (int y = 0; y < 2; ++y) {
        for (int k = 0; k < 2; ++k) {
            const json& cell = matrix[y][k];
            if (!cell.is_number_integer() ||
                (!cell.is_number_unsigned() &&
                 cell.get<std::int64_t>() < 0)) {
                fail("urn.base_matrix",
                     "entries must be nonnegative integers");
            }
            spec.base_matrix[y][k] = cell.get<std::uint64_t>();
        }
    }
    spec.initial_total = root.uint("initial_total", spec.initial_total);
    if (const json* scale = root.find("scale")) {
        Node s(*scale, "urn.scale");
        std::string type = s.require_str("type");
        if (type == "constant") {
            ConstantScale rule;
            rule.factor = s.num("factor", rule.factor);
            spec.scale = rule;
        } else if (type == "power_growth") {
            PowerGrowthScale rule;
            rule.exponent = s.num("exponent", rule.exponent);
            spec.scale = rule;
        } else if (type == "exp_power") {
            ExpPowerScale rule;
            rule.beta = s.num("beta", rule.beta);
            spec.scale = rule;
        } else {
            fail("urn.scale.type",
                 "must be one of constant, power_growth, exp_power");
        }
        s.done();
    }
    root.done();
    validate(spec);
    return spec;
}

UrnSpec load_urn_spec(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("urn spec: ") + err.what());
    }
    return urn_from_json(j);
}

nlohmann::json urn_to_json(const UrnSpec& spec) {
    json j;
    j["base_matrix"] = {{spec.base_matrix[0][0], spec.base_matrix[0][1]},
                        {spec.base_matrix[1][0], spec.base_matrix[1][1]}};
    j["initial_total"] = spec.initial_total;
    json scale;
    if (const auto* c = std::get_if<ConstantScale>(&spec.scale)) {
        scale["type"] = "constant";
        scale["factor"] = c->factor;
    } else if (const auto* p = std::get_if<PowerGrowthScale>(&spec.scale)) {
        scale["type"] = "power_growth";
        scale["exponent"] = p->exponent;
    } else {
        scale["type"] = "exp_power";
        scale["beta"] = std::get<ExpPowerScale>(spec.scale).beta;
    }
    j["scale"] = scale;
    return j;
}

}  // namespace rwalk
