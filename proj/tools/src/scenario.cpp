// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid_cli/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace burstid::cli {

namespace {

constexpr const char* kFormat = "burstid-scenario";

class Ctx {
public:
    explicit Ctx(std::string file) : file_(std::move(file)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& where, const std::string& msg) const {
        std::ostringstream os;
        os << file_;
        const YAML::Mark m = at.Mark();
        if (!m.is_null()) os << ':' << m.line + 1 << ':' << m.column + 1;
        os << ": " << where << ": " << msg;
        throw ConfigError(os.str());
    }

private:
    std::string file_;
};

// Map node with tracked keys; unknown keys are reported by finish().
class MapReader {
public:
    MapReader(const Ctx& ctx, YAML::Node node, std::string where)
        : ctx_(ctx), node_(std::move(node)), where_(std::move(where)) {
        if (!node_.IsMap()) ctx_.fail(node_, where_, "expected a mapping");
    }

    YAML::Node raw(const std::string& key) {
        seen_.insert(key);
        return node_[key];
    }
    bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
    std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }
    const Ctx& ctx() const { return ctx_; }

    template <class T>
    std::optional<T> get(const std::string& key) {
        YAML::Node n = raw(key);
        if (!n) return std::nullopt;
        if (!n.IsScalar()) ctx_.fail(n, path(key), "expected a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            ctx_.fail(n, path(key), "cannot convert '" + n.Scalar() + "'");
        }
    }
    template <class T>
    void set(const std::string& key, T& out) {
        if (auto v = get<T>(key)) out = *v;
    }

    void finish() const {
        for (const auto& kv : node_) {
            const auto k = kv.first.as<std::string>();
            if (!seen_.count(k)) ctx_.fail(kv.first, path(k), "unknown key");
        }
    }

private:
    const Ctx& ctx_;
    YAML::Node node_;
    std::string where_;
    std::set<std::string> seen_;
};

template <class F>
auto wrap(const Ctx& ctx, const YAML::Node& at, const std::string& where, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        ctx.fail(at, where, e.what());
    } catch (const FormatError& e) {
        ctx.fail(at, where, e.what());
    }
}

double scalar_double(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) ctx.fail(n, where, "expected a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        ctx.fail(n, where, "cannot convert '" + n.Scalar() + "' to a number");
    }
}

std::vector<double> double_list(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence()) ctx.fail(n, where, "expected a list of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < n.size(); ++i)
        v.push_back(scalar_double(ctx, n[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

Label label_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) ctx.fail(n, where, "expected a label");
    return wrap(ctx, n, where, [&] { return parse_label(n.Scalar()); });
}

Tech tech_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) ctx.fail(n, where, "expected B, L, Z or W");
    return wrap(ctx, n, where, [&] { return parse_tech(n.Scalar()); });
}

std::vector<Tech> tech_list(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (!n.IsSequence()) ctx.fail(n, where, "expected a list of labels");
    std::vector<Tech> v;
    for (std::size_t i = 0; i < n.size(); ++i) v.push_back(tech_of(ctx, n[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

// number | {uniform: [lo, hi]} | {integers: [lo, hi]} | {mixture: [[w, lo, hi], ...]}
ValueDist dist_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    if (n.IsScalar()) return ValueDist::fixed(scalar_double(ctx, n, where));
    MapReader r(ctx, n, where);
    ValueDist d;
    int forms = 0;
    if (r.has("uniform")) {
        ++forms;
        const auto v = double_list(ctx, r.raw("uniform"), r.path("uniform"));
        if (v.size() != 2) ctx.fail(n, r.path("uniform"), "expected [lo, hi]");
        d = ValueDist::uniform(v[0], v[1]);
    }
    if (r.has("integers")) {
        ++forms;
        const auto v = double_list(ctx, r.raw("integers"), r.path("integers"));
        if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
            ctx.fail(n, r.path("integers"), "expected integer [lo, hi]");
        d = ValueDist::integers(static_cast<int>(v[0]), static_cast<int>(v[1]));
    }
    if (r.has("mixture")) {
        ++forms;
        const YAML::Node m = r.raw("mixture");
        if (!m.IsSequence() || m.size() == 0) ctx.fail(m, r.path("mixture"), "expected a list of [weight, lo, hi]");
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto v = double_list(ctx, m[i], r.path("mixture") + "[" + std::to_string(i) + "]");
            if (v.size() != 3) ctx.fail(m[i], r.path("mixture"), "expected [weight, lo, hi]");
            d.parts.push_back({v[0], v[1], v[2]});
        }
    }
    r.finish();
    if (forms != 1) ctx.fail(n, where, "expected exactly one of uniform, integers, mixture");
    wrap(ctx, n, where, [&] {
        d.validate(where.c_str());
        return 0;
    });
    return d;
}

Pattern pattern_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    const std::string s = n.IsScalar() ? n.Scalar() : "";
    if (s == "periodic") return Pattern::periodic;
    if (s == "poisson") return Pattern::poisson;
    if (s == "saturated") return Pattern::saturated;
    if (s == "beacon") return Pattern::beacon;
    ctx.fail(n, where, "unknown pattern '" + s + "' (periodic, poisson, saturated, beacon)");
}

Hopping hopping_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    const std::string s = n.IsScalar() ? n.Scalar() : "";
    if (s == "fixed") return Hopping::fixed;
    if (s == "ffh") return Hopping::ffh;
    ctx.fail(n, where, "unknown hopping '" + s + "' (fixed, ffh)");
}

SourceSpec source_of(const Ctx& ctx, const YAML::Node& n, const std::string& where) {
    MapReader r(ctx, n, where);
    SourceSpec s;
    const YAML::Node label = r.raw("label");
    if (!label) ctx.fail(n, where, "missing label");
    s.label = label_of(ctx, label, r.path("label"));
    if (auto p = r.raw("pattern")) s.pattern = pattern_of(ctx, p, r.path("pattern"));
    if (auto p = r.raw("hopping")) s.hopping = hopping_of(ctx, p, r.path("hopping"));
    r.set("period_us", s.period_us);
    r.set("jitter_us", s.jitter_us);
    r.set("rate_hz", s.rate_hz);
    r.set("slot_us", s.slot_us);
    r.set("start_us", s.start_us);
    r.set("beacon_spacing_us", s.beacon_spacing_us);
    r.set("ack_oat_us", s.ack_oat_us);
    r.set("sifs_us", s.sifs_us);
    r.set("fading_db", s.fading_db);
    for (const char* k : {"gap_us", "oat_us", "inr_db", "ack_inr_db"}) {
        YAML::Node v = r.raw(k);
        if (!v) continue;
        ValueDist d = dist_of(ctx, v, r.path(k));
        const std::string key = k;
        (key == "gap_us" ? s.gap_us : key == "oat_us" ? s.oat_us : key == "inr_db" ? s.inr_db : s.ack_inr_db) = d;
    }
    if (auto c = r.raw("channels")) {
        for (double v : double_list(ctx, c, r.path("channels"))) {
            if (v != std::floor(v)) ctx.fail(c, r.path("channels"), "channel numbers must be integers");
            s.channels.push_back(static_cast<int>(v));
        }
    }
    r.finish();
    return s;
}

template <class T, class F>
void per_row(MapReader& r, const std::string& key, std::array<T, kLabelRows>& out, F&& conv) {
    YAML::Node n = r.raw(key);
    if (!n) return;
    MapReader m(r.ctx(), n, r.path(key));
    for (int row = 0; row < kLabelRows; ++row) {
        const std::string name = label_from_row(row).str();
        if (YAML::Node v = m.raw(name)) out[row] = conv(v, m.path(name));
    }
    m.finish();
}

BenchmarkSpec benchmark_of(const Ctx& ctx, const YAML::Node& n) {
    MapReader r(ctx, n, "benchmark");
    BenchmarkSpec b;
    if (auto v = r.get<std::size_t>("records")) b.records = *v;
    if (auto v = r.get<std::size_t>("max_attempts")) b.max_attempts = *v;
    r.set("sifs_us", b.sifs_us);
    r.set("lead_us", b.lead_us);
    const auto num = [&](const YAML::Node& v, const std::string& w) { return scalar_double(ctx, v, w); };
    const auto dist = [&](const YAML::Node& v, const std::string& w) { return dist_of(ctx, v, w); };
    per_row(r, "weights", b.weights, num);
    per_row(r, "oat_us", b.oat_us, dist);
    per_row(r, "max_offset_mhz", b.max_offset_mhz, num);
    per_row(r, "ack_oat_us", b.ack_oat_us, num);
    if (auto v = r.raw("sensed_inr_db")) b.sensed_inr_db = dist_of(ctx, v, r.path("sensed_inr_db"));
    r.finish();
    wrap(ctx, n, "benchmark", [&] {
        b.validate();
        return 0;
    });
    return b;
}

TrafficSection traffic_of(const Ctx& ctx, const YAML::Node& n) {
    MapReader r(ctx, n, "traffic");
    TrafficSection t;
    if (auto v = r.raw("it_labels")) t.it_labels = tech_list(ctx, v, r.path("it_labels"));
    if (auto v = r.raw("oat_labels")) t.oat_labels = tech_list(ctx, v, r.path("oat_labels"));
    r.set("min_rssi_dbm", t.min_rssi_dbm);
    r.set("min_oat_us", t.min_oat_us);
    if (auto v = r.raw("rssi_grid")) t.rssi_grid = double_list(ctx, v, r.path("rssi_grid"));
    if (auto v = r.raw("oat_grid")) t.oat_grid = double_list(ctx, v, r.path("oat_grid"));
    r.finish();
    if (t.rssi_grid.empty() || t.oat_grid.empty()) ctx.fail(n, "traffic", "sweep grids must not be empty");
    for (Tech x : t.it_labels)
        if (x == Tech::B || x == Tech::L)
            ctx.fail(n, "traffic.it_labels", "hopping labels (B, L) only support OAT statistics");
    return t;
}

SfSection sf_of(const Ctx& ctx, const YAML::Node& n, const std::filesystem::path& base) {
    MapReader r(ctx, n, "sf_analysis");
    SfSection s;
    if (YAML::Node p = r.raw("pairs")) {
        if (!p.IsSequence()) ctx.fail(p, r.path("pairs"), "expected a list of [label, label]");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string w = r.path("pairs") + "[" + std::to_string(i) + "]";
            if (!p[i].IsSequence() || p[i].size() != 2) ctx.fail(p[i], w, "expected [label, label]");
            s.pairs.emplace_back(label_of(ctx, p[i][0], w), label_of(ctx, p[i][1], w));
        }
    } else {
        s.pairs = {{Label(Tech::W, WifiVariant::g), Label(Tech::B)}};
    }
    r.set("j_min", s.j_min);
    r.set("j_max", s.j_max);
    r.set("i_min", s.i_min);
    r.set("i_max", s.i_max);
    r.set("df_step_mhz", s.df_step_mhz);
    if (auto v = r.raw("gamma_t")) s.gamma_t = double_list(ctx, v, r.path("gamma_t"));
    if (auto v = r.raw("inr_grid")) s.inr_grid = double_list(ctx, v, r.path("inr_grid"));
    if (YAML::Node m = r.raw("mia")) {
        MapReader mr(ctx, m, r.path("mia"));
        MiaSection mia;
        const auto train = mr.get<std::string>("train");
        const auto test = mr.get<std::string>("test");
        if (!train || !test) ctx.fail(m, r.path("mia"), "train and test datasets are required");
        mia.train = base / *train;
        mia.test = base / *test;
        if (YAML::Node ms = mr.raw("methods")) {
            if (!ms.IsSequence()) ctx.fail(ms, mr.path("methods"), "expected a list of methods");
            mia.methods.clear();
            for (std::size_t i = 0; i < ms.size(); ++i)
                mia.methods.push_back(wrap(ctx, ms[i], mr.path("methods"), [&] { return parse_method(ms[i].Scalar()); }));
        }
        mr.finish();
        s.mia = mia;
    }
    r.finish();
    if (s.j_min > s.j_max) ctx.fail(n, "sf_analysis", "j_min must not exceed j_max");
    if (s.i_min > s.i_max) ctx.fail(n, "sf_analysis", "i_min must not exceed i_max");
    if (s.gamma_t.empty() || s.inr_grid.empty()) ctx.fail(n, "sf_analysis", "gamma_t and inr_grid must not be empty");
    return s;
}

}  // namespace

ChannelMap ScenarioConfig::channel_map() const {
    if (!channels_file) return ChannelMap::standard();
    std::ifstream in(*channels_file);
    if (!in) throw ConfigError(channels_file->string() + ": cannot open channel table");
    std::stringstream ss;
    ss << in.rdbuf();
    return ChannelMap::from_tsv(ss.str());
}

MaskTable ScenarioConfig::mask_table() const {
    if (!masks_file) return MaskTable::standard();
    std::ifstream in(*masks_file);
    if (!in) throw ConfigError(masks_file->string() + ": cannot open mask table");
    std::stringstream ss;
    ss << in.rdbuf();
    return MaskTable::from_tsv(ss.str());
}

SignalEnvironment ScenarioConfig::environment() const {
    return SignalEnvironment(noise, frontend_response(bandwidth_scale, frontend), channel_map(), mask_table());
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& source) {
    const Ctx ctx(source.string());
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source.string() << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root || root.IsNull()) throw ConfigError(source.string() + ": empty configuration");
    MapReader r(ctx, root, "");

    const auto format = r.get<std::string>("format");
    if (!format) ctx.fail(root, "format", "missing (expected '" + std::string(kFormat) + " 1.0')");
    {
        std::istringstream fs(*format);
        std::string name, version;
        fs >> name >> version;
        if (name != kFormat || version.empty())
            ctx.fail(root["format"], "format", "expected '" + std::string(kFormat) + " <version>'");
        if (version.substr(0, version.find('.')) != "1")
            ctx.fail(root["format"], "format", "unsupported major version " + version);
    }

    ScenarioConfig c;
    c.source = source;
    const std::filesystem::path base = source.has_parent_path() ? source.parent_path() : ".";
    r.set("seed", c.seed);
    r.set("duration_ms", c.duration_ms);
    if (!(c.duration_ms >= 0.0)) ctx.fail(root["duration_ms"], "duration_ms", "must be non-negative");
    if (auto v = r.get<std::string>("masks")) c.masks_file = base / *v;
    if (auto v = r.get<std::string>("channels")) c.channels_file = base / *v;

    if (YAML::Node n = r.raw("noise")) {
        MapReader m(ctx, n, "noise");
        double mu = c.noise.mu(), sigma = c.noise.sigma();
        m.set("mu_dbm", mu);
        m.set("sigma_db", sigma);
        m.finish();
        c.noise = wrap(ctx, n, "noise", [&] { return NoiseModel(mu, sigma); });
    }
    if (YAML::Node n = r.raw("sensing")) {
        MapReader m(ctx, n, "sensing");
        auto& s = c.sensing;
        m.set("ts_us", s.ts_us);
        m.set("tr_us", s.tr_us);
        m.set("rssi_cutoff_khz", s.rssi_cutoff_khz);
        m.set("df_up_mhz", s.df_up_mhz);
        m.set("df_down_mhz", s.df_down_mhz);
        m.set("df_min_mhz", s.df_min_mhz);
        m.set("tsw_us", s.tsw_us);
        m.set("range_lo_dbm", s.range_lo_dbm);
        m.set("range_hi_dbm", s.range_hi_dbm);
        m.set("sensing_channel", s.sensing_channel);
        m.set("tb_max_us", s.tb_max_us);
        m.set("settle_samples", s.settle_samples);
        m.set("discard_samples", s.discard_samples);
        m.finish();
    }
    if (YAML::Node n = r.raw("frontend")) {
        MapReader m(ctx, n, "frontend");
        m.set("bandwidth_scale", c.bandwidth_scale);
        m.set("nominal_width_mhz", c.frontend.nominal_width_mhz);
        m.set("rolloff", c.frontend.rolloff);
        m.set("floor_db", c.frontend.floor_db);
        m.set("half_span_mhz", c.frontend.half_span_mhz);
        m.set("center_offset_mhz", c.frontend.center_offset_mhz);
        m.set("step_mhz", c.frontend.step_mhz);
        m.finish();
    }
    if (YAML::Node n = r.raw("cca")) {
        MapReader m(ctx, n, "cca");
        m.set("p_detect", c.cca.p_detect);
        m.set("p_false", c.cca.p_false);
        m.finish();
        for (double p : {c.cca.p_detect, c.cca.p_false})
            if (!(p >= 0.0 && p <= 1.0)) ctx.fail(n, "cca", "probabilities must lie in [0, 1]");
    }

    const ChannelMap map = wrap(ctx, root, "channels", [&] { return c.channel_map(); });
    if (YAML::Node n = r.raw("sources")) {
        if (!n.IsSequence()) ctx.fail(n, "sources", "expected a list");
        for (std::size_t i = 0; i < n.size(); ++i) {
            const std::string w = "sources[" + std::to_string(i) + "]";
            SourceSpec s = source_of(ctx, n[i], w);
            wrap(ctx, n[i], w, [&] {
                s.validate(map);
                return 0;
            });
            c.sources.push_back(std::move(s));
        }
    }
    if (YAML::Node n = r.raw("benchmark")) c.benchmark = benchmark_of(ctx, n);
    if (YAML::Node n = r.raw("traffic")) c.traffic = traffic_of(ctx, n);
    if (YAML::Node n = r.raw("sf_analysis")) c.sf = sf_of(ctx, n, base);
    r.finish();

    wrap(ctx, root["sensing"] ? root["sensing"] : root, "sensing", [&] {
        c.sensing.validate();
        return 0;
    });
    wrap(ctx, root["sensing"] ? root["sensing"] : root, "sensing.sensing_channel", [&] {
        return map.center_mhz(Tech::Z, c.sensing.sensing_channel);
    });
    wrap(ctx, root["frontend"] ? root["frontend"] : root, "frontend", [&] {
        return frontend_response(c.bandwidth_scale, c.frontend).size();
    });
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open configuration");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

}  // namespace burstid::cli
