#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nullgauge/forcedyn.hpp>
#include <nullgauge/galilean.hpp>
#include <nullgauge/gauge.hpp>
#include <nullgauge/parse.hpp>
#include <nullgauge/simplify.hpp>
#include <nullgauge/variational.hpp>

namespace nullgauge::cli
{

namespace
{

using json = nlohmann::ordered_json;

const std::vector<std::string> frame_keys{"c0", "v0", "u0", "x0", "te", "xe"};

class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::map<std::string, std::string> frame;
    std::optional<std::string> f1;
    std::optional<std::string> f6;
    std::optional<std::string> lagrangian;
    std::vector<std::string> sweep_f1;
    double tol = default_exactness_tolerance;
    int samples = 100;
    double step = default_quadrature_step;
    std::string format = "json";
    std::optional<std::string> output;
    std::uint64_t seed = 42;
    bool symbolic = false;
    bool no_timestamp = false;
};

// Raw flag storage shared by every subcommand.
struct Flags {
    std::string config;
    std::map<std::string, std::string> frame;
    std::string f1;
    std::string f6;
    std::string lagrangian;
    std::vector<std::string> sweep_f1;
    double tol = 0.0;
    int samples = 0;
    double step = 0.0;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
    bool symbolic = false;
    bool no_timestamp = false;
};

std::string json_scalar_text(const nlohmann::json &v, const std::string &key)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number()) {
        return v.dump();
    }
    throw InputError("config key '" + key + "' must be a number or a string");
}

void load_config(const std::string &path, RunConfig &c)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw InputError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) {
        throw InputError("config file '" + path + "' must hold a JSON object");
    }
    for (const auto &[key, v] : j.items()) {
        try {
            if (std::find(frame_keys.begin(), frame_keys.end(), key) != frame_keys.end()) {
                c.frame[key] = json_scalar_text(v, key);
            } else if (key == "f1") {
                c.f1 = v.get<std::string>();
            } else if (key == "f6") {
                c.f6 = v.get<std::string>();
            } else if (key == "lagrangian") {
                c.lagrangian = v.get<std::string>();
            } else if (key == "sweep_f1") {
                c.sweep_f1 = v.get<std::vector<std::string>>();
            } else if (key == "tol") {
                c.tol = v.get<double>();
            } else if (key == "samples") {
                c.samples = v.get<int>();
            } else if (key == "step") {
                c.step = v.get<double>();
            } else if (key == "format") {
                c.format = v.get<std::string>();
            } else if (key == "output") {
                c.output = v.get<std::string>();
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "symbolic") {
                c.symbolic = v.get<bool>();
            } else if (key == "no_timestamp") {
                c.no_timestamp = v.get<bool>();
            } else {
                throw InputError("unknown config key '" + key + "'");
            }
        } catch (const nlohmann::json::type_error &) {
            throw InputError("config key '" + key + "' has the wrong type");
        }
    }
}

RunConfig merge(const Flags &f, const CLI::App &sub)
{
    auto given = [&sub](const std::string &name) {
        const auto *opt = sub.get_option_no_throw("--" + name);
        return opt != nullptr && opt->count() > 0;
    };
    RunConfig c;
    if (given("config")) {
        load_config(f.config, c);
    }
    for (const auto &key : frame_keys) {
        if (given(key)) {
            c.frame[key] = f.frame.at(key);
        }
    }
    if (given("f1")) {
        c.f1 = f.f1;
    }
    if (given("f6")) {
        c.f6 = f.f6;
    }
    if (given("lagrangian")) {
        c.lagrangian = f.lagrangian;
    }
    if (given("sweep-f1")) {
        c.sweep_f1 = f.sweep_f1;
    }
    if (given("tol")) {
        c.tol = f.tol;
    }
    if (given("samples")) {
        c.samples = f.samples;
    }
    if (given("step")) {
        c.step = f.step;
    }
    if (given("format")) {
        c.format = f.format;
    }
    if (given("output")) {
        c.output = f.output;
    }
    if (given("seed")) {
        c.seed = f.seed;
    }
    c.symbolic = c.symbolic || f.symbolic;
    c.no_timestamp = c.no_timestamp || f.no_timestamp;
    if (c.format != "json" && c.format != "csv") {
        throw InputError("--format must be json or csv");
    }
    if (!(c.tol > 0.0)) {
        throw InputError("--tol must be positive");
    }
    return c;
}

Frame build_frame(const RunConfig &c)
{
    Frame frame = Frame::symbolic();
    if (c.symbolic) {
        return frame;
    }
    frame.xe.reset();
    auto value = [&c](const std::string &key) -> std::optional<Expr> {
        const auto it = c.frame.find(key);
        if (it == c.frame.end()) {
            return std::nullopt;
        }
        try {
            return num(rational_from_decimal(it->second));
        } catch (const std::invalid_argument &e) {
            throw InputError("--" + key + ": " + e.what());
        }
    };
    if (auto v = value("c0")) {
        frame.c0 = *v;
    }
    if (auto v = value("v0")) {
        frame.v0 = *v;
    }
    if (auto v = value("u0")) {
        frame.u0 = *v;
    }
    if (auto v = value("x0")) {
        frame.x0 = *v;
    }
    if (auto v = value("te")) {
        frame.te = *v;
    }
    frame.xe = value("xe");
    frame.validate();
    return frame;
}

Expr parse_spec(const std::string &flag, const std::optional<std::string> &text)
{
    if (!text) {
        throw InputError("missing required --" + flag);
    }
    try {
        return parse(*text);
    } catch (const ParseError &e) {
        throw ParseError("--" + flag + ": " + e.reason(), e.offset());
    }
}

json frame_json(const Frame &frame)
{
    json j;
    j["c0"] = render(frame.c0);
    j["v0"] = render(frame.v0);
    j["u0"] = render(frame.u0);
    j["x0"] = render(frame.x0);
    j["t0"] = render(frame.t0);
    j["te"] = render(frame.te);
    j["xe"] = render(frame.end_position());
    return j;
}

template <class T>
json optional_json(const std::optional<T> &v)
{
    return v ? json(*v) : json(nullptr);
}

json state_json(const State &s)
{
    return json{{"t", s.t}, {"x", s.x}, {"xdot", s.xdot}};
}

std::string timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::filesystem::path resolve_output(const std::string &path)
{
    std::filesystem::path p(path);
    if (const char *dir = std::getenv("NULLGAUGE_OUTPUT_DIR"); dir && *dir && p.is_relative()) {
        p = std::filesystem::path(dir) / p;
    }
    return p;
}

void write_file(const std::filesystem::path &path, const std::string &content)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << content)) {
        throw InputError("cannot write '" + path.string() + "'");
    }
}

std::string dump(json j, const RunConfig &c)
{
    if (!c.no_timestamp) {
        j["generated_at"] = timestamp();
    }
    return j.dump(2) + "\n";
}

void emit(const json &j, const RunConfig &c, std::ostream &out)
{
    if (c.output) {
        write_file(resolve_output(*c.output), dump(j, c));
    } else {
        out << dump(j, c);
    }
}

void require_json(const RunConfig &c, const std::string &command)
{
    if (c.format != "json") {
        throw InputError(command + " only writes JSON");
    }
}

std::string trajectory_csv(const Trajectory &traj)
{
    std::string s = "t,x,xdot\n";
    char buf[96];
    for (const auto &p : traj.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.t, p.x, p.xdot);
        s += buf;
    }
    return s;
}

json trajectory_json(const Trajectory &traj)
{
    json samples = json::array();
    for (const auto &p : traj.samples) {
        samples.push_back(state_json(p));
    }
    return samples;
}

int cmd_verify_null(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    require_json(c, "verify-null");
    if (!c.lagrangian) {
        throw InputError("missing required --lagrangian");
    }
    if (c.samples < 1) {
        throw InputError("--samples must be at least 1");
    }
    const Lagrangian L(parse_spec("lagrangian", c.lagrangian));
    NullnessOptions opts;
    opts.seed = c.seed;
    opts.fixed.values = build_frame(c).numeric_values();
    const auto report = is_null(L, c.samples, c.tol, opts);

    json j;
    switch (report.symbolic) {
    case SymbolicVerdict::null:
        j["symbolic"] = true;
        break;
    case SymbolicVerdict::not_null:
        j["symbolic"] = false;
        break;
    case SymbolicVerdict::inconclusive:
        j["symbolic"] = "inconclusive";
        break;
    }
    j["numeric"] = report.numeric;
    j["max_abs_residual"] = report.max_abs_residual;
    j["samples"] = report.samples;
    if (report.disagreement()) {
        err << "warning: symbolic and numeric verdicts disagree\n";
    }
    emit(j, c, out);
    return report.is_null() ? ok : semantic_false;
}

int cmd_gauge(const RunConfig &c, std::ostream &out, std::ostream &)
{
    require_json(c, "gauge");
    const Frame frame = build_frame(c);
    const auto f1 = parse_spec("f1", c.f1);
    const auto f6 = parse_spec("f6", c.f6);
    const auto g = build_exact_gauge(f1, f6, frame);
    const auto ln = exact_null_lagrangian(g);
    const auto r = exactness_conditions(g, frame, {}, c.tol);

    json ex;
    ex["phi_at_t0"] = optional_json(r.phi_at_t0);
    ex["phi_at_te"] = optional_json(r.phi_at_te);
    ex["difference"] = optional_json(r.difference);
    ex["f1_0_required"] = render(r.f1_0_required);
    ex["f1_0_required_value"] = optional_json(r.f1_0_required_value);
    ex["f1_0_actual"] = optional_json(r.f1_0_actual);
    ex["f1_0_matches"] = optional_json(r.f1_0_matches);
    ex["f1_te_constraint"] = render(r.f1_te_constraint);
    ex["f1_te_derived"] = r.f1_te_derived ? json(render(*r.f1_te_derived)) : json(nullptr);
    ex["f1_te_forms_agree"] = r.f1_te_forms_agree;
    ex["tolerance"] = r.tolerance;
    ex["satisfied"] = r.satisfied;

    json j;
    j["frame"] = frame_json(frame);
    j["f1"] = render(f1);
    j["f6"] = render(f6);
    j["phi_n"] = render(g.expr);
    j["l_n"] = render(ln.expr());
    j["exactness"] = ex;
    emit(j, c, out);
    return r.satisfied ? ok : semantic_false;
}

int cmd_force(const RunConfig &c, std::ostream &out, std::ostream &)
{
    require_json(c, "force");
    const Frame frame = build_frame(c);
    const auto f1 = parse_spec("f1", c.f1);
    const auto law = derive_force(frame, f1);
    json j;
    j["frame"] = frame_json(frame);
    j["f1"] = render(f1);
    j["force"] = render(law.expr);
    j["x_dependent"] = law.x_dependent;
    emit(j, c, out);
    return ok;
}

double numeric_field(const Expr &e, const std::string &key)
{
    if (!e.is_constant()) {
        throw InputError("simulate requires a numeric --" + key);
    }
    return to_double(e.constant_value());
}

int cmd_simulate(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    const Frame frame = build_frame(c);
    numeric_field(frame.c0, "c0");
    numeric_field(frame.v0, "v0");
    const double u0 = numeric_field(frame.u0, "u0");
    const double x0 = numeric_field(frame.x0, "x0");
    const double te = numeric_field(frame.te, "te");
    if (!(te > 0.0)) {
        throw InputError("simulate requires --te > 0");
    }
    if (!(c.step > 0.0) || c.step > te) {
        throw InputError("--step must lie in (0, te]");
    }

    if (!c.sweep_f1.empty()) {
        require_json(c, "simulate --sweep-f1");
        if (c.f1) {
            throw InputError("--f1 and --sweep-f1 are mutually exclusive");
        }
        std::vector<ForceLaw> laws;
        std::set<std::string> keys;
        for (const auto &text : c.sweep_f1) {
            laws.push_back(derive_force(frame, parse_spec("sweep-f1", text)));
            if (!keys.insert(render(laws.back().f1_spec)).second) {
                throw InputError("duplicate --sweep-f1 value '" + text + "'");
            }
        }
        const auto results = integrate_sweep_parallel(laws, x0, u0, 0.0, te, c.step);
        std::map<std::string, json> by_key;
        bool failed = false;
        for (std::size_t i = 0; i < laws.size(); ++i) {
            json run;
            run["force"] = render(laws[i].expr);
            const auto &res = results[i];
            if (res.error) {
                failed = true;
                run["final"] = nullptr;
                run["max_deviation_from_free_motion"] = nullptr;
                run["error"] = *res.error;
                run["failed_step"] = optional_json(res.failed_step);
                err << "error: f1 = " << render(laws[i].f1_spec) << ": " << *res.error << "\n";
            } else {
                run["final"] = state_json(res.trajectory.samples.back());
                run["max_deviation_from_free_motion"] = max_deviation_from_free_motion(res.trajectory);
                run["error"] = nullptr;
                run["failed_step"] = nullptr;
            }
            by_key[render(laws[i].f1_spec)] = run;
        }
        json sweep;
        for (auto &[key, run] : by_key) {
            sweep[key] = run;
        }
        json j;
        j["frame"] = frame_json(frame);
        j["method"] = "rk4-fixed";
        j["step"] = c.step;
        j["sweep"] = sweep;
        emit(j, c, out);
        return failed ? numeric_failure : ok;
    }

    const auto f1 = parse_spec("f1", c.f1);
    const auto law = derive_force(frame, f1);
    const auto traj = integrate(law, x0, u0, 0.0, te, c.step);

    if (!c.output && c.format == "csv") {
        out << trajectory_csv(traj);
        return ok;
    }
    json j;
    j["frame"] = frame_json(frame);
    j["f1"] = render(f1);
    j["force"] = render(law.expr);
    j["method"] = traj.method;
    j["step"] = traj.step;
    j["intervals"] = traj.samples.size() - 1;
    j["final"] = state_json(traj.samples.back());
    j["max_deviation_from_free_motion"] = max_deviation_from_free_motion(traj);
    if (c.output) {
        const auto path = resolve_output(*c.output);
        if (c.format == "csv") {
            write_file(path, trajectory_csv(traj));
        } else {
            write_file(path, trajectory_json(traj).dump(2) + "\n");
        }
        j["trajectory_file"] = path.string();
    } else {
        j["samples"] = trajectory_json(traj);
    }
    out << dump(j, c);
    return ok;
}

int cmd_invariance(const RunConfig &c, std::ostream &out, std::ostream &)
{
    require_json(c, "invariance");
    const Frame frame = build_frame(c);
    InvarianceSolution sol;
    try {
        sol = solve_invariance(frame);
    } catch (const std::runtime_error &e) {
        throw InputError(e.what());
    }
    json j;
    j["frame"] = frame_json(frame);
    j["f2_rule"] = render(sol.f2_rule);
    j["f4_rule"] = render(sol.f4_rule);
    j["residual_constant"] = render(sol.residual_constant);
    j["residual_constant_value"] =
        sol.residual_constant.is_constant() ? json(to_double(sol.residual_constant.constant_value())) : json(nullptr);
    j["identity_boost"] = sol.identity_boost;
    emit(j, c, out);
    return ok;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Null Lagrangians, exact gauge functions and Galilean invariance.", "nullgauge"};
    app.require_subcommand(1);
    Flags flags;

    auto common = [&flags](CLI::App *sub) {
        sub->add_option("--config", flags.config, "JSON config file; flags override its values");
        sub->add_option("--output", flags.output, "Write the report (simulate: the trajectory) to this path");
        sub->add_option("--format", flags.format, "json or csv");
        sub->add_option("--tol", flags.tol, "Numeric tolerance");
        sub->add_option("--samples", flags.samples, "Random sample points");
        sub->add_option("--seed", flags.seed, "Random seed");
        sub->add_flag("--no-timestamp", flags.no_timestamp, "Omit the generated_at field");
        sub->add_flag("--symbolic", flags.symbolic, "Treat every frame parameter as a symbol");
        for (const auto &key : frame_keys) {
            sub->add_option("--" + key, flags.frame[key], "Frame parameter " + key + " (exact decimal)");
        }
    };

    auto *verify = app.add_subcommand("verify-null", "Decide whether a Lagrangian is null");
    common(verify);
    verify->add_option("--lagrangian", flags.lagrangian, "Lagrangian expression");

    auto *gauge = app.add_subcommand("gauge", "Build the exact gauge function and check its endpoint conditions");
    common(gauge);
    gauge->add_option("--f1", flags.f1, "f1(t)");
    gauge->add_option("--f6", flags.f6, "f6(t)");

    auto *force = app.add_subcommand("force", "Derive the force law F[x, t]");
    common(force);
    force->add_option("--f1", flags.f1, "f1(t)");

    auto *simulate = app.add_subcommand("simulate", "Integrate xddot = F[x, t] with fixed-step RK4");
    common(simulate);
    simulate->add_option("--f1", flags.f1, "f1(t)");
    simulate->add_option("--step", flags.step, "Integration step");
    simulate->add_option("--sweep-f1", flags.sweep_f1, "Integrate several f1 specs in parallel");

    auto *invariance = app.add_subcommand("invariance", "Solve the Galilean invariance constraints for f2 and f4");
    common(invariance);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify_null(merge(flags, *verify), out, err);
        }
        if (gauge->parsed()) {
            return cmd_gauge(merge(flags, *gauge), out, err);
        }
        if (force->parsed()) {
            return cmd_force(merge(flags, *force), out, err);
        }
        if (simulate->parsed()) {
            return cmd_simulate(merge(flags, *simulate), out, err);
        }
        return cmd_invariance(merge(flags, *invariance), out, err);
    } catch (const SingularityError &e) {
        err << "error [" << e.tag() << "]: " << e.what() << "\n";
        return input_error;
    } catch (const IntegrationError &e) {
        err << "numeric failure: " << e.what() << "\n";
        return numeric_failure;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return input_error;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception &e) {
        err << "failure: " << e.what() << "\n";
        return numeric_failure;
    }
}

} // namespace nullgauge::cli
