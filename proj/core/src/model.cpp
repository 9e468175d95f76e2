// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <json.hpp>

#include "burstid/classifiers.hpp"
#include "burstid/error.hpp"

namespace burstid {

using nlohmann::json;

std::string_view method_name(Method m) {
    switch (m) {
    case Method::ct1: return "ct1";
    case Method::ct2: return "ct2";
    case Method::rfct: return "rfct";
    case Method::msvm: return "msvm";
    }
    return "?";
}

Method parse_method(std::string_view s) {
    if (s == "ct1") return Method::ct1;
    if (s == "ct2") return Method::ct2;
    if (s == "rfct") return Method::rfct;
    if (s == "msvm") return Method::msvm;
    throw InvalidArgument("unknown method '" + std::string(s) + "' (expected ct1, ct2, rfct or msvm)");
}

Method method_of(const Model& m) {
    switch (m.index()) {
    case 0: return Method::ct1;
    case 1: return Method::ct2;
    case 2: return Method::rfct;
    default: return Method::msvm;
    }
}

Tech classify(const Model& m, const FeatureVector& v) {
    return std::visit([&](const auto& x) { return classify(x, v); }, m);
}

Model train(Method method, const Dataset& d, const TrainOptions& opt) {
    switch (method) {
    case Method::ct1: return train_ct1(d, opt.ct1_grid).model;
    case Method::ct2: return train_ct2(d, opt.ct2_max_splits, opt.features);
    case Method::rfct: {
        ForestParams p = opt.forest;
        p.seed = opt.seed;
        p.features = opt.features;
        return train_rfct(d, p);
    }
    case Method::msvm: {
        MsvmParams p = opt.msvm;
        p.features = opt.features;
        return train_msvm(d, p);
    }
    }
    throw InvalidArgument("unknown method");
}

namespace {

constexpr const char* kFormat = "burstid-model";
constexpr const char* kVersion = "1.0";

json tree_to_json(const TreeModel& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, std::string(1, tech_code(n.label)),
                         n.counts});
    return {{"features", t.features}, {"nodes", nodes}};
}

TreeModel tree_from_json(const json& j) {
    TreeModel t;
    t.features = j.at("features").get<std::vector<int>>();
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.label = parse_tech(n.at(4).get<std::string>());
        node.counts = n.at(5).get<std::array<std::uint32_t, kTechCount>>();
        t.nodes.push_back(node);
    }
    const int size = static_cast<int>(t.nodes.size());
    for (const auto& n : t.nodes)
        if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size ||
                               n.feature >= static_cast<int>(FeatureVector::kSize)))
            throw FormatError("model: tree node references are out of range");
    if (t.nodes.empty()) throw FormatError("model: empty tree");
    return t;
}

std::vector<std::string> tech_strings(const std::vector<Tech>& v) {
    std::vector<std::string> out;
    for (Tech t : v) out.emplace_back(1, tech_code(t));
    return out;
}

struct ToJson {
    json operator()(const Ct1Model& m) const {
        return {{"p1", m.p.p1}, {"p2", m.p.p2}, {"p3", m.p.p3}, {"use_cca", m.use_cca},
                {"has_l", m.has_l}, {"tl_max", m.tl_max}, {"ec_max", m.ec_max},
                {"dynamic_range_db", m.dynamic_range_db}};
    }
    json operator()(const TreeModel& m) const { return tree_to_json(m); }
    json operator()(const ForestModel& m) const {
        json trees = json::array();
        for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
        return {{"prior", m.prior}, {"trees", trees}};
    }
    json operator()(const MsvmModel& m) const {
        json learners = json::array();
        for (const auto& l : m.learners)
            learners.push_back({{"positive", std::string(1, tech_code(l.positive))},
                                {"negative", std::string(1, tech_code(l.negative))},
                                {"bias", l.bias},
                                {"iterations", l.iterations},
                                {"alpha", l.alpha},
                                {"coef", l.coef},
                                {"support", l.support}});
        return {{"features", m.features}, {"mean", m.mean}, {"scale", m.scale},
                {"gamma", m.gamma}, {"box", m.box}, {"classes", tech_strings(m.classes)},
                {"coding", m.coding}, {"learners", learners}};
    }
};

}  // namespace

std::string save_model(const Model& m) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["kind"] = std::string(method_name(method_of(m)));
    j["model"] = std::visit(ToJson{}, m);
    return j.dump(1) + "\n";
}

Model load_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model: not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw FormatError("model: unexpected format tag");
        const auto ver = j.at("version").get<std::string>();
        if (ver.substr(0, ver.find('.')) != "1") throw FormatError("model: unsupported version '" + ver + "'");
        const Method kind = parse_method(j.at("kind").get<std::string>());
        const json& b = j.at("model");
        switch (kind) {
        case Method::ct1: {
            Ct1Model m;
            m.p = {b.at("p1").get<double>(), b.at("p2").get<double>(), b.at("p3").get<double>()};
            m.use_cca = b.at("use_cca").get<bool>();
            m.has_l = b.at("has_l").get<bool>();
            m.tl_max = b.at("tl_max").get<double>();
            m.ec_max = b.at("ec_max").get<double>();
            m.dynamic_range_db = b.at("dynamic_range_db").get<double>();
            return m;
        }
        case Method::ct2: return tree_from_json(b);
        case Method::rfct: {
            ForestModel f;
            f.prior = b.at("prior").get<std::array<double, kTechCount>>();
            for (const auto& t : b.at("trees")) f.trees.push_back(tree_from_json(t));
            if (f.trees.empty()) throw FormatError("model: forest without trees");
            return f;
        }
        case Method::msvm: {
            MsvmModel m;
            m.features = b.at("features").get<std::vector<int>>();
            m.mean = b.at("mean").get<std::vector<double>>();
            m.scale = b.at("scale").get<std::vector<double>>();
            m.gamma = b.at("gamma").get<double>();
            m.box = b.at("box").get<double>();
            for (const auto& c : b.at("classes")) m.classes.push_back(parse_tech(c.get<std::string>()));
            m.coding = b.at("coding").get<std::vector<std::vector<int>>>();
            for (const auto& l : b.at("learners")) {
                BinarySvm s;
                s.positive = parse_tech(l.at("positive").get<std::string>());
                s.negative = parse_tech(l.at("negative").get<std::string>());
                s.bias = l.at("bias").get<double>();
                s.iterations = l.at("iterations").get<long>();
                s.alpha = l.at("alpha").get<std::vector<double>>();
                s.coef = l.at("coef").get<std::vector<double>>();
                s.support = l.at("support").get<std::vector<std::vector<double>>>();
                m.learners.push_back(std::move(s));
            }
            if (m.mean.size() != m.features.size() || m.scale.size() != m.features.size() ||
                m.coding.size() != m.classes.size())
                throw FormatError("model: inconsistent MSVM dimensions");
            return m;
        }
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("model: missing or mistyped field: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("model: ") + e.what());
    }
    throw FormatError("model: unknown kind");
}

}  // namespace burstid
