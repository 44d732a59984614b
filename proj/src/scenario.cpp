#include "encircle/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace encircle {

double ShapeConfig::height_at(long k) const {
    return height_amp * std::cos(height_freq * M_PI * static_cast<double>(k));
}

Vec6 ScenarioConfig::resolved_initial_estimate() const {
    if (initial_estimate) return *initial_estimate;
    Vec6 x = Vec6::Zero();
    x.head<3>() = protected_target.initial.position;
    return x;
}

void ScenarioConfig::validate() const {
    if (!(timestep > 0.0) || !std::isfinite(timestep)) {
        throw std::invalid_argument("scenario: timestep must be finite and > 0");
    }
    if (horizon < 0) {
        throw std::invalid_argument("scenario: horizon must be >= 0");
    }
    if (burn_in < 0) {
        throw std::invalid_argument("scenario: burn_in must be >= 0");
    }
    if (horizon > 0 && horizon < burn_in) {
        throw std::invalid_argument("scenario: horizon must be >= burn_in");
    }
    if (range_noise.sigma1 < 0.0 || range_noise.sigma2 < 0.0) {
        throw std::invalid_argument("scenario: range noise variances must be >= 0");
    }
    if (!(shape.rho > 0.0)) {
        throw std::invalid_argument("scenario: shape rho must be > 0");
    }
    controller.validate();
    // Mixture invariants (gamma range, PSD variances) are enforced here.
    protected_target.mixture();
    hostile_target.mixture();
    Eigen::SelfAdjointEigenSolver<Mat6> es(initial_covariance);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("scenario: initial covariance must be positive definite");
    }
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void put(std::ostream& os, const char* key, const Eigen::Ref<const Eigen::VectorXd>& v) {
    os << key << "=";
    for (int i = 0; i < v.size(); ++i) os << fmt(v[i]) << (i + 1 < v.size() ? ' ' : '\n');
}

void put_mat(std::ostream& os, const char* key, const Mat3& m) {
    os << key << "=";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            os << fmt(m(r, c)) << (r == 2 && c == 2 ? '\n' : ' ');
}

} // namespace

std::string ScenarioConfig::canonical_string() const {
    std::ostringstream os;
    os << "timestep=" << fmt(timestep) << "\n";
    os << "horizon=" << horizon << "\n";
    os << "burn_in=" << burn_in << "\n";
    put(os, "g1", guardian1.stacked());
    put(os, "g2", guardian2.stacked());
    put(os, "t1", protected_target.initial.stacked());
    put(os, "t2", hostile_target.initial.stacked());
    os << "t1.gamma=" << fmt(protected_target.gamma) << "\n";
    put_mat(os, "t1.w1", protected_target.w1);
    put_mat(os, "t1.w2", protected_target.w2);
    os << "t2.gamma=" << fmt(hostile_target.gamma) << "\n";
    put_mat(os, "t2.w1", hostile_target.w1);
    put_mat(os, "t2.w2", hostile_target.w2);
    os << "sigma1=" << fmt(range_noise.sigma1) << "\n";
    os << "sigma2=" << fmt(range_noise.sigma2) << "\n";
    os << "rho=" << fmt(shape.rho) << "\n";
    os << "height_amp=" << fmt(shape.height_amp) << "\n";
    os << "height_freq=" << fmt(shape.height_freq) << "\n";
    const ControllerParams& c = controller;
    os << "alpha=" << fmt(c.alpha) << " beta=" << fmt(c.beta)
       << " u_dist=" << fmt(c.u_dist) << " t=" << fmt(c.t) << " r1=" << fmt(c.r1)
       << " rc=" << fmt(c.rc) << " t_in=" << c.t_in
       << " l_protect=" << fmt(c.l_protect) << " l_warn=" << fmt(c.l_warn)
       << " l_capture=" << fmt(c.l_capture) << " h1=" << fmt(c.h1)
       << " ground=" << (c.protected_ground ? 1 : 0) << "\n";
    put(os, "G0_diag", initial_covariance.diagonal());
    put(os, "x0", resolved_initial_estimate());
    return os.str();
}

std::string ScenarioConfig::hash() const {
    const std::string s = canonical_string();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

void require_keys(const YAML::Node& node, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!node.IsMap()) fail(where + " must be a mapping");
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            fail("unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
        }
    }
}

// Accepts plain numbers and "a/b" fraction strings (rho is 1/24 in the
// reference scenario and deserves to be exact).
double number_or_fraction(const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) fail(where + " must be a number");
    const std::string s = n.as<std::string>();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        try {
            const double num = std::stod(s.substr(0, slash));
            const double den = std::stod(s.substr(slash + 1));
            if (den == 0.0) fail(where + ": zero denominator");
            return num / den;
        } catch (const std::invalid_argument&) {
            fail(where + ": bad fraction '" + s + "'");
        }
    }
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(where + " must be a number");
    }
}

Vec3 vec3_of(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || n.size() != 3) fail(where + " must be a list of 3 numbers");
    return {number_or_fraction(n[0], where), number_or_fraction(n[1], where),
            number_or_fraction(n[2], where)};
}

// 3 values -> diagonal, 9 values -> full row-major matrix.
Mat3 mat3_of(const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence() || (n.size() != 3 && n.size() != 9)) {
        fail(where + " must be a list of 3 (diagonal) or 9 (row-major) numbers");
    }
    if (n.size() == 3) {
        return Vec3(vec3_of(n, where)).asDiagonal();
    }
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = number_or_fraction(n[i], where);
    return m;
}

AgentState agent_of(const YAML::Node& n, const std::string& where) {
    require_keys(n, where, {"position", "velocity"});
    AgentState s;
    if (n["position"]) s.position = vec3_of(n["position"], where + ".position");
    if (n["velocity"]) s.velocity = vec3_of(n["velocity"], where + ".velocity");
    return s;
}

TargetConfig target_of(const YAML::Node& n, const std::string& where, bool* ground) {
    std::set<std::string> allowed = {"position", "velocity", "gamma", "w1", "w2"};
    if (ground) allowed.insert("ground");
    require_keys(n, where, allowed);
    TargetConfig t;
    if (n["position"]) t.initial.position = vec3_of(n["position"], where + ".position");
    if (n["velocity"]) t.initial.velocity = vec3_of(n["velocity"], where + ".velocity");
    if (n["gamma"]) t.gamma = number_or_fraction(n["gamma"], where + ".gamma");
    if (n["w1"]) t.w1 = mat3_of(n["w1"], where + ".w1");
    if (n["w2"]) t.w2 = mat3_of(n["w2"], where + ".w2");
    if (ground && n["ground"]) *ground = n["ground"].as<bool>();
    return t;
}

} // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    require_keys(root, "",
                 {"timestep", "horizon", "burn_in", "seeds", "guardian1", "guardian2",
                  "protected_target", "hostile_target", "ranging", "shape",
                  "controller", "filter"});

    ScenarioConfig cfg;
    if (root["timestep"]) cfg.timestep = number_or_fraction(root["timestep"], "timestep");
    if (root["horizon"]) cfg.horizon = root["horizon"].as<long>();
    if (root["burn_in"]) cfg.burn_in = root["burn_in"].as<long>();
    if (root["seeds"]) {
        const YAML::Node& s = root["seeds"];
        if (!s.IsSequence()) fail("seeds must be a list");
        for (const auto& v : s) cfg.seeds.push_back(v.as<std::uint64_t>());
    }
    if (root["guardian1"]) cfg.guardian1 = agent_of(root["guardian1"], "guardian1");
    if (root["guardian2"]) cfg.guardian2 = agent_of(root["guardian2"], "guardian2");

    bool ground = false;
    if (root["protected_target"]) {
        cfg.protected_target = target_of(root["protected_target"], "protected_target", &ground);
    }
    if (root["hostile_target"]) {
        cfg.hostile_target = target_of(root["hostile_target"], "hostile_target", nullptr);
    }

    if (root["ranging"]) {
        require_keys(root["ranging"], "ranging", {"sigma1", "sigma2"});
        if (root["ranging"]["sigma1"]) {
            cfg.range_noise.sigma1 = number_or_fraction(root["ranging"]["sigma1"], "ranging.sigma1");
        }
        if (root["ranging"]["sigma2"]) {
            cfg.range_noise.sigma2 = number_or_fraction(root["ranging"]["sigma2"], "ranging.sigma2");
        }
    }

    if (root["shape"]) {
        require_keys(root["shape"], "shape", {"rho", "height_amp", "height_freq"});
        if (root["shape"]["rho"]) cfg.shape.rho = number_or_fraction(root["shape"]["rho"], "shape.rho");
        if (root["shape"]["height_amp"]) {
            cfg.shape.height_amp = number_or_fraction(root["shape"]["height_amp"], "shape.height_amp");
        }
        if (root["shape"]["height_freq"]) {
            cfg.shape.height_freq = number_or_fraction(root["shape"]["height_freq"], "shape.height_freq");
        }
    }

    if (root["controller"]) {
        const YAML::Node& c = root["controller"];
        require_keys(c, "controller",
                     {"alpha", "beta", "u_dist", "r1", "rc", "t_in", "l_protect",
                      "l_warn", "l_capture", "h1"});
        ControllerParams& p = cfg.controller;
        if (c["alpha"]) p.alpha = number_or_fraction(c["alpha"], "controller.alpha");
        if (c["beta"]) p.beta = number_or_fraction(c["beta"], "controller.beta");
        if (c["u_dist"]) p.u_dist = number_or_fraction(c["u_dist"], "controller.u_dist");
        if (c["r1"]) p.r1 = number_or_fraction(c["r1"], "controller.r1");
        if (c["rc"]) p.rc = number_or_fraction(c["rc"], "controller.rc");
        if (c["t_in"]) p.t_in = c["t_in"].as<long>();
        if (c["l_protect"]) p.l_protect = number_or_fraction(c["l_protect"], "controller.l_protect");
        if (c["l_warn"]) p.l_warn = number_or_fraction(c["l_warn"], "controller.l_warn");
        if (c["l_capture"]) p.l_capture = number_or_fraction(c["l_capture"], "controller.l_capture");
        if (c["h1"]) p.h1 = number_or_fraction(c["h1"], "controller.h1");
    }
    cfg.controller.t = cfg.timestep;
    cfg.controller.protected_ground = ground;

    if (root["filter"]) {
        const YAML::Node& f = root["filter"];
        require_keys(f, "filter", {"initial_covariance", "initial_estimate"});
        if (f["initial_covariance"]) {
            const YAML::Node& g0 = f["initial_covariance"];
            if (g0.IsScalar()) {
                cfg.initial_covariance =
                    number_or_fraction(g0, "filter.initial_covariance") * Mat6::Identity();
            } else if (g0.IsSequence() && g0.size() == 6) {
                Vec6 d;
                for (int i = 0; i < 6; ++i) {
                    d[i] = number_or_fraction(g0[i], "filter.initial_covariance");
                }
                cfg.initial_covariance = d.asDiagonal();
            } else {
                fail("filter.initial_covariance must be a scalar or a list of 6 diagonal values");
            }
        }
        if (f["initial_estimate"]) {
            const YAML::Node& x0 = f["initial_estimate"];
            if (x0.IsScalar() && x0.as<std::string>() == "protected") {
                cfg.initial_estimate.reset();
            } else if (x0.IsSequence() && x0.size() == 6) {
                Vec6 x;
                for (int i = 0; i < 6; ++i) {
                    x[i] = number_or_fraction(x0[i], "filter.initial_estimate");
                }
                cfg.initial_estimate = x;
            } else {
                fail("filter.initial_estimate must be \"protected\" or a list of 6 values");
            }
        }
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace encircle
