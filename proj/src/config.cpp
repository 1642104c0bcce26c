#include "eqboot/config.hpp"

#include "eqboot/serialize.hpp"
#include "eqboot/theory.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace eqboot {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("config: unknown key '" + where + it.key() + "'");
        }
    }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError("config: missing required key '" + where + key + "'");
    }
    return *it;
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_number()) {
        throw ConfigError("config: '" + where + key + "' must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_number(obj, where, key);
}

std::int64_t get_int(const json& obj, const std::string& where, const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_number_integer()) {
        throw ConfigError("config: '" + where + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::int64_t get_int_or(const json& obj, const std::string& where, const std::string& key,
                        std::int64_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return get_int(obj, where, key);
}

bool get_bool_or(const json& obj, const std::string& where, const std::string& key,
                 bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError("config: '" + where + key + "' must be a boolean");
    }
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key) {
    const json& v = require(obj, where, key);
    if (!v.is_string()) {
        throw ConfigError("config: '" + where + key + "' must be a string");
    }
    return v.get<std::string>();
}

Shape parse_shape(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config: 'image_shape' must be an object");
    }
    reject_unknown_keys(j, "image_shape.", {"height", "width"});
    const Shape shape{static_cast<int>(get_int(j, "image_shape.", "height")),
                      static_cast<int>(get_int(j, "image_shape.", "width"))};
    if (shape.height < 1 || shape.width < 1) {
        throw ConfigError("config: image_shape dimensions must be positive");
    }
    return shape;
}

struct GroupSpec {
    int max_shift = 0;
    bool rotations = false;
};

GroupSpec parse_group(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError("config: '" + where + "' must be an object");
    }
    reject_unknown_keys(j, where + ".", {"max_shift", "rotations"});
    GroupSpec spec;
    spec.max_shift = static_cast<int>(get_int_or(j, where + ".", "max_shift", 0));
    spec.rotations = get_bool_or(j, where + ".", "rotations", false);
    if (spec.max_shift < 0) {
        throw ConfigError("config: '" + where + ".max_shift' must be nonnegative");
    }
    return spec;
}

Eigen::MatrixXd parse_kernel(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        throw ConfigError("config: 'operator.kernel' must be a nonempty 2D array");
    }
    const auto kh = static_cast<Eigen::Index>(j.size());
    const auto kw = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd kernel(kh, kw);
    for (Eigen::Index r = 0; r < kh; ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != kw) {
            throw ConfigError("config: 'operator.kernel' rows must have equal length");
        }
        for (Eigen::Index c = 0; c < kw; ++c) {
            if (!j[r][c].is_number()) {
                throw ConfigError("config: 'operator.kernel' entries must be numbers");
            }
            kernel(r, c) = j[r][c].get<double>();
        }
    }
    return kernel;
}

json kernel_to_json(const Eigen::MatrixXd& kernel) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < kernel.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
            row.push_back(kernel(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ErrorMode parse_error_mode(const std::string& mode) {
    if (mode == "forward") {
        return ErrorMode::ForwardTransform;
    }
    if (mode == "inverse") {
        return ErrorMode::InverseTransform;
    }
    throw ConfigError("config: 'bootstrap.error_mode' must be \"forward\" or \"inverse\"");
}

}  // namespace

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open file '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << "config: parse error in '" << path << "' at byte " << e.byte << ": " << e.what();
        throw ConfigError(msg.str());
    }
}

Experiment build_experiment(const json& config) {
    if (!config.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    reject_unknown_keys(config, "",
                        {"problem", "image_shape", "operator", "noise", "estimator", "signal",
                         "group", "bootstrap", "methods", "levels", "n_trials", "master_seed",
                         "output_dir", "debug"});

    const std::string problem = get_string(config, "", "problem");
    if (problem != "compressed_sensing" && problem != "inpainting" && problem != "deblur") {
        throw ConfigError(
            "config: 'problem' must be compressed_sensing, inpainting, or deblur");
    }
    const Shape shape = parse_shape(require(config, "", "image_shape"));

    const auto master_seed =
        static_cast<std::uint64_t>(get_int(config, "", "master_seed"));
    const auto n_trials = static_cast<int>(get_int(config, "", "n_trials"));
    if (n_trials < 1) {
        throw ConfigError("config: 'n_trials' must be >= 1");
    }
    const std::string output_dir = get_string(config, "", "output_dir");

    // noise
    const json& noise_j = require(config, "", "noise");
    reject_unknown_keys(noise_j, "noise.", {"sigma"});
    const double sigma = get_number(noise_j, "noise.", "sigma");
    if (sigma < 0.0) {
        throw ConfigError("config: 'noise.sigma' must be nonnegative");
    }
    const NoiseModel noise = gaussian_noise(sigma);

    // levels
    const json& levels_j = require(config, "", "levels");
    if (!levels_j.is_array() || levels_j.empty()) {
        throw ConfigError("config: 'levels' must be a nonempty array");
    }
    std::vector<double> levels;
    for (const json& v : levels_j) {
        if (!v.is_number()) {
            throw ConfigError("config: 'levels' entries must be numbers");
        }
        levels.push_back(v.get<double>());
        if (levels.back() <= 0.0 || levels.back() >= 1.0) {
            throw ConfigError("config: 'levels' entries must lie in (0, 1)");
        }
    }
    if (!std::is_sorted(levels.begin(), levels.end())) {
        throw ConfigError("config: 'levels' must be ascending");
    }

    // operator
    json op_j = config.value("operator", json::object());
    if (!op_j.is_object()) {
        throw ConfigError("config: 'operator' must be an object");
    }
    reject_unknown_keys(op_j, "operator.", {"m", "keep_prob", "kernel", "seed"});
    const auto op_seed = static_cast<std::uint64_t>(
        get_int_or(op_j, "operator.", "seed", static_cast<std::int64_t>(master_seed)));

    LinearOperator op = [&]() -> LinearOperator {
        if (problem == "compressed_sensing") {
            const auto m = get_int(op_j, "operator.", "m");
            if (m < 1) {
                throw ConfigError("config: 'operator.m' must be >= 1");
            }
            return gaussian_cs(shape, static_cast<Eigen::Index>(m),
                               derive_stream(op_seed, stream_ids::op));
        }
        if (problem == "inpainting") {
            const double keep = get_number_or(op_j, "operator.", "keep_prob", 0.5);
            if (keep < 0.0 || keep > 1.0) {
                throw ConfigError("config: 'operator.keep_prob' must lie in [0, 1]");
            }
            return inpainting_mask(shape, keep, derive_stream(op_seed, stream_ids::op));
        }
        const Eigen::MatrixXd kernel = parse_kernel(require(op_j, "operator.", "kernel"));
        try {
            return circular_blur(shape, kernel);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: operator.kernel: ") + e.what());
        }
    }();

    // group (single-method default) and methods
    GroupSpec base_group;
    if (config.contains("group")) {
        base_group = parse_group(config.at("group"), "group");
    }

    struct MethodDraft {
        std::string name;
        bool has_group = false;
        GroupSpec group;
    };
    std::vector<MethodDraft> drafts;
    if (config.contains("methods")) {
        const json& methods_j = config.at("methods");
        if (!methods_j.is_array() || methods_j.empty()) {
            throw ConfigError("config: 'methods' must be a nonempty array");
        }
        for (std::size_t i = 0; i < methods_j.size(); ++i) {
            const json& mj = methods_j[i];
            const std::string where = "methods[" + std::to_string(i) + "].";
            if (!mj.is_object()) {
                throw ConfigError("config: method entries must be objects");
            }
            reject_unknown_keys(mj, where, {"name", "group"});
            MethodDraft draft;
            draft.name = get_string(mj, where, "name");
            if (mj.contains("group")) {
                draft.has_group = true;
                draft.group = parse_group(mj.at("group"), where + "group");
            }
            drafts.push_back(std::move(draft));
        }
        std::set<std::string> names;
        for (const auto& d : drafts) {
            if (!names.insert(d.name).second) {
                throw ConfigError("config: duplicate method name '" + d.name + "'");
            }
        }
    } else {
        MethodDraft draft;
        draft.has_group = !(base_group.max_shift == 0 && !base_group.rotations);
        draft.group = base_group;
        draft.name = draft.has_group ? "equivariant" : "naive";
        drafts.push_back(std::move(draft));
    }

    // bootstrap
    const json& boot_j = require(config, "", "bootstrap");
    reject_unknown_keys(boot_j, "bootstrap.", {"n_samples", "error_mode"});
    const auto n_samples = static_cast<int>(get_int(boot_j, "bootstrap.", "n_samples"));
    if (n_samples < 1) {
        throw ConfigError("config: 'bootstrap.n_samples' must be >= 1");
    }
    const std::string mode_str = boot_j.contains("error_mode")
                                     ? get_string(boot_j, "bootstrap.", "error_mode")
                                     : std::string("forward");
    const ErrorMode error_mode = parse_error_mode(mode_str);

    // signal model; invariant under the union of all method groups
    json signal_j = config.value("signal", json::object());
    if (!signal_j.is_object()) {
        throw ConfigError("config: 'signal' must be an object");
    }
    reject_unknown_keys(signal_j, "signal.", {"k", "coeff_sigma", "max_freq", "seed"});
    const auto model_k = static_cast<int>(get_int_or(signal_j, "signal.", "k", 8));
    if (model_k < 1) {
        throw ConfigError("config: 'signal.k' must be >= 1");
    }
    const double coeff_sigma = get_number_or(signal_j, "signal.", "coeff_sigma", 1.0);
    const auto max_freq = static_cast<int>(get_int_or(signal_j, "signal.", "max_freq", 3));
    const auto model_seed = static_cast<std::uint64_t>(get_int_or(
        signal_j, "signal.", "seed", static_cast<std::int64_t>(master_seed)));

    int union_shift = base_group.max_shift;
    bool union_rot = base_group.rotations;
    for (const auto& d : drafts) {
        if (d.has_group) {
            union_shift = std::max(union_shift, d.group.max_shift);
            union_rot = union_rot || d.group.rotations;
        }
    }
    const GroupAction model_action = [&] {
        try {
            return GroupAction(shape, union_shift, union_rot);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: group: ") + e.what());
        }
    }();
    SignalModel model =
        make_invariant_model(model_action, shape, model_k,
                             derive_stream(model_seed, stream_ids::model), max_freq,
                             coeff_sigma);
    const double defect = model_invariance_defect(model, model_action);
    if (defect > 1e-8) {
        throw NumericError("signal model: invariance defect exceeds 1e-8");
    }

    // estimator
    const json& est_j = require(config, "", "estimator");
    reject_unknown_keys(est_j, "estimator.",
                        {"kind", "lambda", "n_iters", "step", "n_train", "train_seed",
                         "train_noise_sigma"});
    const std::string est_kind = get_string(est_j, "estimator.", "kind");
    json est_echo{{"kind", est_kind}};
    Estimator estimator = [&]() -> Estimator {
        try {
            if (est_kind == "tikhonov") {
                const double lambda =
                    get_number_or(est_j, "estimator.", "lambda", default_lambda(op));
                est_echo["lambda"] = lambda;
                return tikhonov(op, lambda);
            }
            if (est_kind == "pseudoinverse") {
                return pseudoinverse(op);
            }
            if (est_kind == "oracle_projector") {
                const double lambda = get_number_or(est_j, "estimator.", "lambda", 0.0);
                est_echo["lambda"] = lambda;
                return oracle_projector(model.basis, op, lambda);
            }
            if (est_kind == "ista") {
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(op.dense());
                const double lip = svd.singularValues()[0] * svd.singularValues()[0];
                const double step =
                    get_number_or(est_j, "estimator.", "step", 0.9 / lip);
                const double lambda =
                    get_number_or(est_j, "estimator.", "lambda", default_lambda(op));
                const auto iters =
                    static_cast<int>(get_int_or(est_j, "estimator.", "n_iters", 100));
                est_echo["lambda"] = lambda;
                est_echo["step"] = step;
                est_echo["n_iters"] = iters;
                return ista(op, lambda, iters, step);
            }
            if (est_kind == "learned_linear") {
                const auto n_train =
                    static_cast<int>(get_int_or(est_j, "estimator.", "n_train", 200));
                if (n_train < 1) {
                    throw ConfigError("config: 'estimator.n_train' must be >= 1");
                }
                const auto train_seed = static_cast<std::uint64_t>(get_int_or(
                    est_j, "estimator.", "train_seed",
                    static_cast<std::int64_t>(master_seed)));
                const double train_sigma =
                    get_number_or(est_j, "estimator.", "train_noise_sigma", sigma);
                RngStream train_rng = derive_stream(train_seed, stream_ids::training);
                const NoiseModel train_noise = gaussian_noise(train_sigma);
                std::vector<Signal> xs;
                std::vector<Measurement> ys;
                xs.reserve(n_train);
                ys.reserve(n_train);
                for (int i = 0; i < n_train; ++i) {
                    xs.push_back(sample_signal(model, train_rng));
                    ys.push_back(sample_noise(train_noise, op.apply(xs.back()), train_rng));
                }
                double lambda;
                if (est_j.contains("lambda")) {
                    lambda = get_number(est_j, "estimator.", "lambda");
                } else {
                    double trace_syy = 0.0;
                    for (const Measurement& y : ys) {
                        trace_syy += y.data().squaredNorm();
                    }
                    lambda = 1e-3 * trace_syy / static_cast<double>(op.rows());
                }
                est_echo["lambda"] = lambda;
                est_echo["n_train"] = n_train;
                est_echo["train_seed"] = train_seed;
                est_echo["train_noise_sigma"] = train_sigma;
                return learned_linear(xs, ys, lambda);
            }
            throw ConfigError("config: unknown estimator kind '" + est_kind + "'");
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: estimator: ") + e.what());
        }
    }();

    // debug hooks
    bool force_inf = false;
    if (config.contains("debug")) {
        const json& dbg = config.at("debug");
        reject_unknown_keys(dbg, "debug.", {"force_infinite_radius"});
        force_inf = get_bool_or(dbg, "debug.", "force_infinite_radius", false);
    }

    // materialize methods
    std::vector<MethodSpec> methods;
    json methods_echo = json::array();
    for (const auto& d : drafts) {
        BootstrapConfig bc;
        bc.n_samples = n_samples;
        bc.error_mode = error_mode;
        if (d.has_group && !(d.group.max_shift == 0 && !d.group.rotations)) {
            try {
                bc.group = GroupAction(shape, d.group.max_shift, d.group.rotations);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: method '") + d.name + "': " + e.what());
            }
        }
        json me{{"name", d.name}};
        if (bc.group.has_value()) {
            me["group"] = group_descriptor(*bc.group);
        }
        methods_echo.push_back(std::move(me));
        methods.push_back(MethodSpec{d.name, std::move(bc)});
    }

    Experiment exp{shape,
                   std::move(op),
                   noise,
                   std::move(model),
                   std::move(estimator),
                   std::move(methods),
                   std::move(levels),
                   n_trials,
                   master_seed,
                   output_dir,
                   force_inf,
                   json{}};

    exp.echo = json{
        {"problem", problem},
        {"image_shape", {{"height", shape.height}, {"width", shape.width}}},
        {"operator", operator_descriptor(exp.op)},
        {"noise", {{"sigma", sigma}}},
        {"estimator", est_echo},
        {"signal",
         {{"k", model_k},
          {"coeff_sigma", coeff_sigma},
          {"max_freq", max_freq},
          {"seed", model_seed},
          {"resolved_dim", exp.model.dim()}}},
        {"group", {{"max_shift", base_group.max_shift}, {"rotations", base_group.rotations}}},
        {"bootstrap", {{"n_samples", n_samples}, {"error_mode", mode_str}}},
        {"methods", methods_echo},
        {"levels", exp.levels},
        {"n_trials", n_trials},
        {"master_seed", master_seed},
        {"output_dir", output_dir},
        {"debug", {{"force_infinite_radius", force_inf}}},
    };
    return exp;
}

}  // namespace eqboot
