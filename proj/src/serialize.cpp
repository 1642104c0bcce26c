#include "eqboot/serialize.hpp"

namespace eqboot {

using nlohmann::json;

json group_descriptor(const GroupAction& action) {
    return json{{"max_shift", action.max_shift()}, {"rotations", action.rotations()}};
}

GroupAction group_from_descriptor(const json& j, Shape shape) {
    return GroupAction(shape, j.at("max_shift").get<int>(), j.at("rotations").get<bool>());
}

json element_to_json(const GroupElement& g) {
    return json::array({g.dy, g.dx, g.quarter_turns});
}

GroupElement element_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError("group element: expected [dy, dx, r]");
    }
    return GroupElement{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

json operator_descriptor(const LinearOperator& op) {
    json params;
    std::string kind;
    switch (op.kind()) {
        case LinearOperator::Kind::GaussianCS:
            kind = "compressed_sensing";
            params["m"] = op.rows();
            break;
        case LinearOperator::Kind::InpaintingMask:
            kind = "inpainting";
            params["keep_prob"] = op.keep_prob();
            break;
        case LinearOperator::Kind::CircularBlur: {
            kind = "deblur";
            const Eigen::MatrixXd& k = op.kernel();
            json rows = json::array();
            for (Eigen::Index i = 0; i < k.rows(); ++i) {
                json row = json::array();
                for (Eigen::Index j2 = 0; j2 < k.cols(); ++j2) {
                    row.push_back(k(i, j2));
                }
                rows.push_back(std::move(row));
            }
            params["kernel"] = std::move(rows);
            break;
        }
    }
    return json{{"kind", kind},
                {"shape", {{"height", op.signal_shape().height}, {"width", op.signal_shape().width}}},
                {"params", params},
                {"seed", {{"master", op.seed_master()}, {"stream", op.seed_stream()}}}};
}

LinearOperator operator_from_descriptor(const json& j) {
    const Shape shape{j.at("shape").at("height").get<int>(),
                      j.at("shape").at("width").get<int>()};
    const std::string kind = j.at("kind").get<std::string>();
    const json& params = j.at("params");
    if (kind == "compressed_sensing") {
        const auto rng = derive_stream(j.at("seed").at("master").get<std::uint64_t>(),
                                       j.at("seed").at("stream").get<std::uint64_t>());
        return gaussian_cs(shape, params.at("m").get<Eigen::Index>(), rng);
    }
    if (kind == "inpainting") {
        const auto rng = derive_stream(j.at("seed").at("master").get<std::uint64_t>(),
                                       j.at("seed").at("stream").get<std::uint64_t>());
        return inpainting_mask(shape, params.at("keep_prob").get<double>(), rng);
    }
    if (kind == "deblur") {
        const json& rows = params.at("kernel");
        const auto kh = static_cast<Eigen::Index>(rows.size());
        if (kh == 0) {
            throw ConfigError("operator descriptor: empty kernel");
        }
        const auto kw = static_cast<Eigen::Index>(rows[0].size());
        Eigen::MatrixXd kernel(kh, kw);
        for (Eigen::Index i = 0; i < kh; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != kw) {
                throw ConfigError("operator descriptor: ragged kernel rows");
            }
            for (Eigen::Index c = 0; c < kw; ++c) {
                kernel(i, c) = rows[i][c].get<double>();
            }
        }
        return circular_blur(shape, kernel);
    }
    throw ConfigError("operator descriptor: unknown kind '" + kind + "'");
}

json bootstrap_result_to_json(const BootstrapResult& result) {
    json elements = json::array();
    for (const GroupElement& g : result.elements) {
        elements.push_back(element_to_json(g));
    }
    return json{{"n_samples", result.n()},
                {"errors", result.errors},
                {"elements", std::move(elements)},
                {"shape",
                 {{"height", result.center.shape().height},
                  {"width", result.center.shape().width}}}};
}

json bias_report_to_json(const BiasReport& report) {
    return json{{"true_error", report.true_error},
                {"bias1", report.bias1},
                {"bias2", report.bias2},
                {"lhs", report.lhs},
                {"residual", report.residual}};
}

}  // namespace eqboot
