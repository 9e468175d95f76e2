// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "burstid/benchmark_data.hpp"
#include "burstid/dataset.hpp"
#include "burstid/error.hpp"
#include "burstid/sf_model.hpp"

namespace burstid::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FormatError(p.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Dataset read_dataset(const fs::path& p) {
    std::istringstream is(read_file(p));
    try {
        return read_csv(is);
    } catch (const FormatError& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
}

// Collects output files, then writes them and a manifest that replays the run.
class OutputDir {
public:
    OutputDir(fs::path dir, std::string command, std::vector<std::string> args)
        : dir_(std::move(dir)), command_(std::move(command)), args_(std::move(args)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
    void input(const fs::path& p) { inputs_.push_back(p); }
    void seed(std::uint64_t s) { seed_ = s; }

    void commit() const {
        fs::create_directories(dir_);
        ordered_json m;
        m["format"] = "burstid-manifest";
        m["version"] = "1.0";
        m["command"] = command_;
        m["args"] = args_;
        m["cwd"] = fs::current_path().string();
        if (seed_) m["seed"] = *seed_;
        m["inputs"] = ordered_json::array();
        for (const auto& p : inputs_)
            m["inputs"].push_back({{"path", p.string()}, {"fnv1a64", hex64(fnv1a64(read_file(p)))}});
        m["outputs"] = ordered_json::object();
        for (const auto& [name, content] : files_) {
            std::ofstream os(dir_ / name, std::ios::binary);
            os << content;
            if (!os) throw FormatError((dir_ / name).string() + ": write failed");
            m["outputs"][name] = hex64(fnv1a64(content));
        }
        std::ofstream os(dir_ / "manifest.json", std::ios::binary);
        os << m.dump(2) << '\n';
        if (!os) throw FormatError((dir_ / "manifest.json").string() + ": write failed");
    }

private:
    fs::path dir_;
    std::string command_;
    std::vector<std::string> args_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::vector<fs::path> inputs_;
    std::optional<std::uint64_t> seed_;
};

// Command-line words after the program name, with the output directory
// replaced by a placeholder so the manifest does not depend on it.
std::vector<std::string> replay_args(const std::vector<std::string>& argv) {
    std::vector<std::string> a;
    for (std::size_t i = 1; i < argv.size(); ++i) {
        const std::string& w = argv[i];
        if ((w == "-o" || w == "--out") && i + 1 < argv.size()) {
            a.push_back(w);
            a.push_back("{out}");
            ++i;
        } else if (w.rfind("--out=", 0) == 0) {
            a.push_back("--out={out}");
        } else {
            a.push_back(w);
        }
    }
    return a;
}

std::string status_name(SampleStatus s) {
    switch (s) {
        case SampleStatus::complete: return "complete";
        case SampleStatus::incomplete: return "incomplete";
        case SampleStatus::discarded: return "discarded";
    }
    return "";
}

std::string csv_dataset(const Dataset& d) {
    std::ostringstream os;
    write_csv(os, d);
    return os.str();
}

std::string events_csv(const std::vector<BurstEvent>& events) {
    std::ostringstream os;
    os << "# format: burstid-events 1.0\n";
    os << "id,source,label,start_us,oat_us,channel,inr_db,it_us,is_ack\n";
    for (const auto& e : events)
        os << e.id << ',' << e.source << ',' << e.label.str() << ',' << format_double(e.start_us) << ','
           << format_double(e.oat_us) << ',' << e.channel << ',' << format_double(e.inr_db) << ','
           << (e.it_us ? format_double(*e.it_us) : "") << ',' << (e.is_ack ? 1 : 0) << '\n';
    return os.str();
}

std::string trace_csv(const RssiTrace& t) {
    std::ostringstream os;
    os << "# format: burstid-trace 1.0\n";
    os << "# tuned_mhz: " << format_double(t.tuned_mhz) << '\n';
    os << "k,t_us,rssi_dbm\n";
    for (std::size_t k = 0; k < t.size(); ++k) os << k << ',' << format_double(t.time_us(k)) << ',' << t.rssi[k] << '\n';
    return os.str();
}

std::string bursts_csv(const ScenarioRun& r) {
    std::ostringstream os;
    os << "# format: burstid-bursts 1.0\n";
    os << "first_sample,run_length,start_us,est_oat_us,mean_rssi_dbm,status,x0,x1,x2,cy,label,inr_db,true_oat_us,"
          "primary_event\n";
    for (const auto& b : r.sensed.bursts) {
        os << b.first_sample << ',' << b.run_length << ',' << format_double(b.start_us) << ','
           << format_double(b.est_oat_us) << ',' << format_double(b.mean_rssi_dbm) << ',' << status_name(b.status)
           << ',' << b.x0 << ',' << b.x1 << ',' << b.x2 << ',' << b.cy() << ',' << (b.label ? b.label->str() : "")
           << ',' << format_double(b.inr_db) << ',' << format_double(b.true_oat_us) << ','
           << (b.primary_event ? std::to_string(*b.primary_event) : "") << '\n';
    }
    return os.str();
}

std::string cdf_csv(const EmpiricalCdf& c) {
    std::ostringstream os;
    write_cdf_csv(os, c);
    return os.str();
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (v.empty()) throw InvalidArgument(std::string(what) + ": empty list");
    return v;
}

std::vector<int> parse_features(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int found = -1;
        for (std::size_t i = 0; i < FeatureVector::kSize; ++i)
            if (FeatureVector::kNames[i] == item) found = static_cast<int>(i);
        if (found < 0) throw InvalidArgument("--features: unknown feature '" + item + "'");
        v.push_back(found);
    }
    return v;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void cmd_simulate(const SimulateArgs& a, OutputDir& o, std::ostream& out) {
    const ScenarioConfig cfg = load_scenario(a.config);
    o.input(a.config);
    const std::uint64_t seed = a.seed.value_or(cfg.seed);
    o.seed(seed);
    if (cfg.benchmark && !cfg.sources.empty())
        throw ConfigError(a.config + ": benchmark and sources sections are exclusive");
    if (cfg.benchmark) {
        const BenchmarkOutput b = benchmark_dataset(*cfg.benchmark, cfg.sensing, cfg.environment(), seed, cfg.cca);
        o.add("features.csv", csv_dataset(b.data));
        const auto n = b.data.counts();
        out << "benchmark: " << b.data.size() << " records from " << b.attempts << " bursts (B " << n[0] << ", L "
            << n[1] << ", Z " << n[2] << ", W " << n[3] << ")\n";
        return;
    }
    const ScenarioRun run = run_scenario(cfg, seed);
    const Dataset d = scenario_features(run);
    o.add("events.csv", events_csv(run.events));
    o.add("trace.csv", trace_csv(run.sensed.trace));
    o.add("bursts.csv", bursts_csv(run));
    o.add("features.csv", csv_dataset(d));
    out << "simulate: " << run.events.size() << " events, " << run.sensed.trace.size() << " samples, "
        << run.sensed.bursts.size() << " bursts, " << d.size() << " complete\n";
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string dataset;
    std::string method;
    std::uint64_t seed = 1;
    std::string features;
    int max_splits = 20;
    int trees = 50;
    double box = MsvmParams{}.box;
    long max_iter = MsvmParams{}.max_iter;
    double ct1_step = 1.0;
    std::string out;
};

std::string train_report(const Model& m, const Dataset& d) {
    std::ostringstream os;
    const auto n = d.counts();
    os << "method: " << method_name(method_of(m)) << '\n';
    os << "records: " << d.size() << " (B " << n[0] << ", L " << n[1] << ", Z " << n[2] << ", W " << n[3] << ")\n";
    const EvalReport r = evaluate(m, d, 0.0);
    os << "training mean TPR: " << format_double(r.mean_tpr) << '\n';
    if (const auto* c = std::get_if<Ct1Model>(&m)) {
        os << "p1: " << format_double(c->p.p1) << "\np2: " << format_double(c->p.p2)
           << "\np3: " << format_double(c->p.p3) << "\ntl_max: " << format_double(c->tl_max)
           << "\nec_max: " << format_double(c->ec_max) << '\n';
    } else if (const auto* t = std::get_if<TreeModel>(&m)) {
        os << "splits: " << t->splits() << '\n';
    } else if (const auto* f = std::get_if<ForestModel>(&m)) {
        os << "trees: " << f->trees.size() << '\n';
    } else if (const auto* s = std::get_if<MsvmModel>(&m)) {
        for (const auto& l : s->learners)
            os << "learner " << tech_code(l.positive) << '/' << tech_code(l.negative) << ": " << l.support.size()
               << " support vectors, " << l.iterations << " iterations\n";
    }
    return os.str();
}

void cmd_train(const TrainArgs& a, OutputDir& o, std::ostream& out) {
    const Dataset d = read_dataset(a.dataset);
    o.input(a.dataset);
    o.seed(a.seed);
    TrainOptions opt;
    opt.seed = a.seed;
    if (!a.features.empty()) opt.features = parse_features(a.features);
    opt.ct2_max_splits = a.max_splits;
    opt.forest.n_trees = a.trees;
    opt.forest.seed = a.seed;
    opt.msvm.box = a.box;
    opt.msvm.max_iter = a.max_iter;
    opt.ct1_grid = Ct1Grid::uniform(a.ct1_step);
    const Model m = train(parse_method(a.method), d, opt);
    o.add("model.json", save_model(m));
    const std::string rep = train_report(m, d);
    o.add("train_report.txt", rep);
    out << rep;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string model;
    std::string dataset;
    std::string gamma = "0,5,10,15,20,25,30";
    std::string out;
};

void cmd_evaluate(const EvaluateArgs& a, OutputDir& o, std::ostream& out) {
    const Model m = load_model(read_file(a.model));
    o.input(a.model);
    const Dataset d = read_dataset(a.dataset);
    o.input(a.dataset);
    std::vector<EvalReport> reps;
    for (double g : parse_double_list(a.gamma, "--gamma")) reps.push_back(evaluate(m, d, g));
    const std::string name(method_name(method_of(m)));
    std::ostringstream ev, cf;
    write_eval_csv(ev, reps, name);
    write_confusion_csv(cf, reps, name);
    o.add("eval.csv", ev.str());
    o.add("confusion.csv", cf.str());
    for (const auto& r : reps) out << report_table(r, name) << '\n';
}

// ---------------------------------------------------------------- analyze-sf

struct ConfigArgs {
    std::string config;
    std::string model;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void cmd_analyze_sf(const ConfigArgs& a, OutputDir& o, std::ostream& out) {
    const ScenarioConfig cfg = load_scenario(a.config);
    o.input(a.config);
    const SfSection sf = cfg.sf.value_or(SfSection{});
    const SfModelOptions opt{cfg.noise, sf.df_step_mhz, sf.i_min, sf.i_max};
    const ShiftReport rep = shift_selection_report(sf.pairs, frontend_response(cfg.bandwidth_scale, cfg.frontend),
                                                   sf.j_min, sf.j_max, sf.gamma_t, opt, sf.inr_grid, cfg.mask_table());
    std::ostringstream er, fl;
    er << "# format: burstid-shift 1.0\npair,gamma_t,j,shift_mhz,error\n";
    for (const auto& r : rep.rows)
        er << r.pair << ',' << format_double(r.gamma_t) << ',' << r.j << ',' << format_double(r.j * sf.df_step_mhz)
           << ',' << format_double(r.error) << '\n';
    fl << "# format: burstid-shift-flags 1.0\npair,gamma_t,j,shift_mhz\n";
    for (const auto& f : rep.flags) {
        fl << f.pair << ',' << format_double(f.gamma_t) << ',' << f.j << ',' << format_double(f.j * sf.df_step_mhz)
           << '\n';
        out << f.pair << " gamma_T=" << format_double(f.gamma_t) << ": flagged shift " << f.j * sf.df_step_mhz
            << " MHz\n";
    }
    o.add("shift_errors.csv", er.str());
    o.add("shift_flags.csv", fl.str());

    if (sf.mia) {
        const Dataset train = read_dataset(sf.mia->train);
        const Dataset test = read_dataset(sf.mia->test);
        o.input(sf.mia->train);
        o.input(sf.mia->test);
        const std::uint64_t seed = a.seed.value_or(cfg.seed);
        o.seed(seed);
        const MiaResult res = mia_experiment(train, test, sf.mia->methods, sf, cfg, seed);
        std::ostringstream mi;
        mi << "# format: burstid-mia 1.0\n# pair: W,B  j: " << res.j << '\n';
        mi << "method,gamma_t,a0,e_bar,a_hat,a_exp\n";
        for (const auto& r : res.rows)
            mi << method_name(r.method) << ',' << format_double(r.gamma_t) << ',' << format_double(r.a0) << ','
               << format_double(r.e_bar) << ',' << format_double(r.a_hat) << ',' << format_double(r.a_exp) << '\n';
        mi << "method,gap\n";
        for (Method m : sf.mia->methods) {
            mi << method_name(m) << ',' << format_double(res.gap(m)) << '\n';
            out << "MIA gap " << method_name(m) << ": " << res.gap(m) << '\n';
        }
        o.add("mia.csv", mi.str());
    }
}

// ---------------------------------------------------------------- traffic

void cmd_traffic(const ConfigArgs& a, OutputDir& o, std::ostream& out) {
    const ScenarioConfig cfg = load_scenario(a.config);
    o.input(a.config);
    const Model model = load_model(read_file(a.model));
    o.input(a.model);
    const std::uint64_t seed = a.seed.value_or(cfg.seed);
    o.seed(seed);
    const TrafficSection t = cfg.traffic.value_or(TrafficSection{});

    const ScenarioRun run = run_scenario(cfg, seed);
    const auto bursts = classify_bursts(run.sensed.bursts, model);

    std::ostringstream cb;
    cb << "# format: burstid-classified 1.0\nstart_us,oat_us,rssi_dbm,predicted\n";
    for (const auto& b : bursts)
        cb << format_double(b.start_us) << ',' << format_double(b.oat_us) << ',' << format_double(b.rssi_dbm) << ','
           << (b.predicted ? std::string(1, tech_code(*b.predicted)) : "") << '\n';
    o.add("classified.csv", cb.str());

    std::ostringstream sum;
    sum << "# format: burstid-traffic 1.0\n";
    sum << "label,count,it_median_us,oat_median_us,ks,ks_min,argmin_rssi_dbm,argmin_oat_us\n";
    std::vector<Tech> labels = t.oat_labels;
    for (Tech x : t.it_labels)
        if (std::find(labels.begin(), labels.end(), x) == labels.end()) labels.push_back(x);
    for (Tech x : labels) {
        const std::string tc(1, tech_code(x));
        const bool want_it = std::find(t.it_labels.begin(), t.it_labels.end(), x) != t.it_labels.end();
        const bool want_oat = std::find(t.oat_labels.begin(), t.oat_labels.end(), x) != t.oat_labels.end();
        const TrafficStats st = label_traffic_stats(bursts, x, t.min_rssi_dbm, t.min_oat_us, cfg.sensing.sensing_channel);
        sum << tc << ',' << st.count << ',';
        if (want_it && st.it_cdf) {
            o.add("it_cdf_" + tc + ".csv", cdf_csv(*st.it_cdf));
            sum << format_double(st.it_cdf->median());
        }
        sum << ',';
        if (want_oat && st.oat_cdf) {
            o.add("oat_cdf_" + tc + ".csv", cdf_csv(*st.oat_cdf));
            sum << format_double(st.oat_cdf->median());
        }
        sum << ',';
        const auto ref = want_it ? reference_it_cdf(run.events, x) : std::nullopt;
        if (ref) {
            o.add("reference_it_cdf_" + tc + ".csv", cdf_csv(*ref));
            if (st.it_cdf) sum << format_double(ks_distance(*st.it_cdf, *ref));
            const KsSweep sw = ks_sweep(bursts, x, run.events, t.rssi_grid, t.oat_grid);
            std::ostringstream ss;
            write_sweep_csv(ss, sw);
            o.add("ks_sweep_" + tc + ".csv", ss.str());
            sum << ',';
            if (sw.argmin)
                sum << format_double(*sw.min()) << ',' << format_double(sw.rssi_grid[sw.argmin->first]) << ','
                    << format_double(sw.oat_grid[sw.argmin->second]);
            else
                sum << ",,";
        } else {
            sum << ",,,";
        }
        sum << '\n';
        out << "traffic " << tc << ": " << st.count << " bursts";
        if (want_it && st.it_cdf) out << ", median IT " << st.it_cdf->median() << " us";
        out << '\n';
    }
    o.add("traffic_summary.csv", sum.str());
}

// ---------------------------------------------------------------- export

struct ExportArgs {
    std::string what = "all";
    std::string config;
    std::string out;
};

void cmd_export(const ExportArgs& a, OutputDir& o, std::ostream& out) {
    ScenarioConfig cfg;
    if (!a.config.empty()) {
        cfg = load_scenario(a.config);
        o.input(a.config);
    }
    const bool all = a.what == "all";
    if (!all && a.what != "masks" && a.what != "frontend" && a.what != "coupling" && a.what != "channels")
        throw InvalidArgument("export: unknown artifact '" + a.what + "' (masks, frontend, coupling, channels, all)");
    const MaskTable masks = cfg.mask_table();
    const ChannelMap map = cfg.channel_map();
    const auto db = [](double lin) { return lin > 0.0 ? format_double(10.0 * std::log10(lin)) : std::string(); };

    if (all || a.what == "masks") {
        std::vector<Spectrum> s;
        for (int r = 0; r < kLabelRows; ++r) s.push_back(mask_spectrum(label_from_row(r), masks));
        std::ostringstream os;
        os << "# format: burstid-masks-psd 1.0\nf_mhz";
        for (int r = 0; r < kLabelRows; ++r) os << ',' << label_from_row(r).str();
        os << '\n';
        const double step = kDefaultGridStep;
        for (int k = -320; k <= 320; ++k) {
            os << format_double(k * step);
            for (const auto& sp : s) os << ',' << db(sp.linear_at(k * step));
            os << '\n';
        }
        o.add("masks.csv", os.str());
    }
    if (all || a.what == "frontend") {
        const Spectrum h = frontend_response(cfg.bandwidth_scale, cfg.frontend);
        std::ostringstream os;
        os << "# format: burstid-frontend 1.0\nf_mhz,gain_db\n";
        for (std::size_t k = 0; k < h.size(); ++k)
            os << format_double(h.freq(k)) << ',' << format_double(h.density_db()[k]) << '\n';
        o.add("frontend.csv", os.str());
    }
    if (all || a.what == "coupling") {
        const SignalEnvironment env = cfg.environment();
        std::ostringstream os;
        os << "# format: burstid-coupling 1.0\ndf_mhz";
        for (int r = 0; r < kLabelRows; ++r) os << ',' << label_from_row(r).str();
        os << '\n';
        for (int k = -80; k <= 80; ++k) {
            os << format_double(0.5 * k);
            for (int r = 0; r < kLabelRows; ++r) {
                const double c = env.coupling_db(label_from_row(r), 0.5 * k);
                os << ',' << (std::isfinite(c) ? format_double(c) : std::string());
            }
            os << '\n';
        }
        o.add("coupling.csv", os.str());
    }
    if (all || a.what == "channels") {
        std::ostringstream os;
        os << "# format: burstid-channels-export 1.0\ntech,channel,center_mhz,width_mhz\n";
        for (Tech t : kAllTechs) {
            const Label l = t == Tech::W ? Label(t, WifiVariant::g) : Label(t);
            for (int ch : map.channels(t))
                os << tech_code(t) << ',' << ch << ',' << format_double(map.center_mhz(t, ch)) << ','
                   << format_double(map.width_mhz(l, ch)) << '\n';
        }
        o.add("channels.csv", os.str());
    }
    out << "export: " << a.what << '\n';
}

}  // namespace

// ---------------------------------------------------------------- shared pieces

double MiaResult::gap(Method m) const {
    double s = 0.0;
    int n = 0;
    for (const auto& r : rows)
        if (r.method == m) {
            s += r.a_hat - r.a_exp;
            ++n;
        }
    if (n == 0) throw InvalidArgument("mia: method not evaluated");
    return s / n;
}

MiaResult mia_experiment(const Dataset& train, const Dataset& test, const std::vector<Method>& methods,
                         const SfSection& sf, const ScenarioConfig& cfg, std::uint64_t seed) {
    const std::array<Tech, 2> wb{Tech::W, Tech::B};
    const Dataset tr = subset(train, wb);
    const Dataset te = subset(test, wb);
    if (tr.counts()[0] == 0 || tr.counts()[3] == 0 || te.counts()[0] == 0 || te.counts()[3] == 0)
        throw InvalidArgument("mia: datasets need both W and B records");

    MiaResult res;
    res.j = static_cast<int>(std::lround(cfg.sensing.df_up_mhz / sf.df_step_mhz));
    const Spectrum h = frontend_response(cfg.bandwidth_scale, cfg.frontend);
    const MaskTable masks = cfg.mask_table();
    const SfModelOptions opt{cfg.noise, sf.df_step_mhz, sf.i_min, sf.i_max};

    // 802.11 variants weighted by their share of the test set.
    std::array<double, kLabelRows> share{};
    double n_w = 0.0;
    for (const auto& r : te.records)
        if (r.label.tech() == Tech::W) {
            share[r.label.row()] += 1.0;
            n_w += 1.0;
        }
    const SfModel model_b(mask_spectrum(Label(Tech::B), masks, h.step()), h, res.j, opt);
    std::vector<double> e_bar(sf.gamma_t.size(), 0.0);
    for (int row = 0; row < kLabelRows; ++row) {
        if (share[row] == 0.0) continue;
        const SfModel model_w(mask_spectrum(label_from_row(row), masks, h.step()), h, res.j, opt);
        for (std::size_t g = 0; g < sf.gamma_t.size(); ++g) {
            const double e = sf_error(model_w, model_b, res.j, sf.inr_grid, sf.inr_grid, sf.gamma_t[g]).error;
            e_bar[g] += share[row] / n_w * (1.0 - e);
        }
    }

    TrainOptions opt_train;
    opt_train.seed = seed;
    opt_train.features = kSfFeatures;
    opt_train.forest.seed = seed;
    for (Method m : methods) {
        const Model model = burstid::train(m, tr, opt_train);
        const double a0 = evaluate(model, te, 0.0).mean_tpr;
        for (std::size_t g = 0; g < sf.gamma_t.size(); ++g) {
            const double eb = std::clamp(e_bar[g], 0.0, 1.0);
            res.rows.push_back({m, sf.gamma_t[g], a0, eb, mia_upper_bound(a0, eb),
                                evaluate(model, te, sf.gamma_t[g]).mean_tpr});
        }
    }
    return res;
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
    const SignalEnvironment env = cfg.environment();
    ScenarioRun r;
    r.events = generate_traffic(cfg.sources, cfg.duration_ms, seed, env.map());
    // The trace spans the scenario, extended to the end of any frame running past it.
    double end_us = cfg.duration_ms * 1000.0;
    for (const auto& e : r.events) end_us = std::max(end_us, e.end_us() + cfg.sensing.tr_us);
    const auto samples = static_cast<std::size_t>(std::ceil(end_us / cfg.sensing.ts_us));
    if (samples == 0) {
        r.sensed.trace.ts_us = cfg.sensing.ts_us;
        r.sensed.trace.tuned_mhz = env.map().center_mhz(Tech::Z, cfg.sensing.sensing_channel);
        r.sensed.trace.seed = seed;
        return r;
    }
    r.sensed = sense(r.events, cfg.sensing, env, seed, cfg.cca, TraceWindow{0.0, samples});
    return r;
}

Dataset scenario_features(const ScenarioRun& run) {
    Dataset d;
    for (const auto& b : run.sensed.bursts) {
        if (!b.complete()) continue;
        d.records.push_back({extract_features(b), *b.label, b.inr_db, run.events[*b.primary_event].channel});
    }
    return d;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Burst-level interference detection and identification toolkit", "burstid"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "burstid 1.0.0");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Run a scenario or benchmark config and write traces and features");
    c_sim->add_option("config", sim.config, "Scenario YAML")->required();
    c_sim->add_option("--seed", sim.seed, "Override the config seed");
    c_sim->add_option("-o,--out", sim.out, "Output directory")->required();

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train a classifier on a feature CSV");
    c_train->add_option("dataset", tr.dataset, "Feature CSV")->required();
    c_train->add_option("-m,--method", tr.method, "ct1, ct2, rfct or msvm")->required();
    c_train->add_option("--seed", tr.seed, "Training seed");
    c_train->add_option("--features", tr.features, "Comma-separated feature names (default: all)");
    c_train->add_option("--max-splits", tr.max_splits, "CT2 split budget");
    c_train->add_option("--trees", tr.trees, "RFCT ensemble size");
    c_train->add_option("--box", tr.box, "MSVM box constraint");
    c_train->add_option("--max-iter", tr.max_iter, "MSVM iteration cap per binary learner");
    c_train->add_option("--ct1-step", tr.ct1_step, "CT1 grid step in dB");
    c_train->add_option("-o,--out", tr.out, "Output directory")->required();

    EvaluateArgs ev;
    auto* c_eval = app.add_subcommand("evaluate", "Evaluate a model over INR thresholds");
    c_eval->add_option("model", ev.model, "Model file")->required();
    c_eval->add_option("dataset", ev.dataset, "Feature CSV")->required();
    c_eval->add_option("--gamma", ev.gamma, "Comma-separated INR thresholds in dB");
    c_eval->add_option("-o,--out", ev.out, "Output directory")->required();

    ConfigArgs sf;
    auto* c_sf = app.add_subcommand("analyze-sf", "Spectral-feature error model and shift selection");
    c_sf->add_option("config", sf.config, "Scenario YAML with an sf_analysis section")->required();
    c_sf->add_option("--seed", sf.seed, "Training seed for the MIA comparison");
    c_sf->add_option("-o,--out", sf.out, "Output directory")->required();

    ConfigArgs tf;
    auto* c_tf = app.add_subcommand("traffic", "Per-technology traffic statistics from a classified scenario");
    c_tf->add_option("config", tf.config, "Scenario YAML")->required();
    c_tf->add_option("--model", tf.model, "Model file")->required();
    c_tf->add_option("--seed", tf.seed, "Override the config seed");
    c_tf->add_option("-o,--out", tf.out, "Output directory")->required();

    ExportArgs ex;
    auto* c_ex = app.add_subcommand("export", "Write plot-ready spectra, couplings and channel tables");
    c_ex->add_option("what", ex.what, "masks, frontend, coupling, channels or all");
    c_ex->add_option("--config", ex.config, "Scenario YAML overriding masks, channels and front end");
    c_ex->add_option("-o,--out", ex.out, "Output directory")->required();

    std::vector<std::string> rev(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << "burstid 1.0.0\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "burstid: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const auto args = replay_args(argv);
    try {
        if (*c_sim) {
            OutputDir o(sim.out, "simulate", args);
            cmd_simulate(sim, o, out);
            o.commit();
        } else if (*c_train) {
            OutputDir o(tr.out, "train", args);
            cmd_train(tr, o, out);
            o.commit();
        } else if (*c_eval) {
            OutputDir o(ev.out, "evaluate", args);
            cmd_evaluate(ev, o, out);
            o.commit();
        } else if (*c_sf) {
            OutputDir o(sf.out, "analyze-sf", args);
            cmd_analyze_sf(sf, o, out);
            o.commit();
        } else if (*c_tf) {
            OutputDir o(tf.out, "traffic", args);
            cmd_traffic(tf, o, out);
            o.commit();
        } else if (*c_ex) {
            OutputDir o(ex.out, "export", args);
            cmd_export(ex, o, out);
            o.commit();
        }
    } catch (const ConvergenceError& e) {
        err << "burstid: " << e.what() << " (iterations " << e.iterations() << ", KKT gap " << e.kkt_gap() << ")\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        err << "burstid: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace burstid::cli
