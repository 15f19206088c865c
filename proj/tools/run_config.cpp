#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "aeids/error.hpp"

namespace aeids::cli {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T parse_uint(std::string_view key, std::string_view text) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InputError("config: " + std::string(key) + " expects a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw InputError("config: " + std::string(key) + " expects a real number, got '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw InputError("config: " + std::string(key) + " expects true/false, got '" + std::string(text) + "'");
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& render) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += render(items[i]);
    }
    return out;
}

struct KeySpec {
    std::string name;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, std::string_view)> set;
    /// False for keys that never change results (paths, naming, parallelism).
    bool affects_results = true;
};

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = [] {
        std::vector<KeySpec> s;
        auto add = [&](std::string name, auto get, auto set, bool affects = true) {
            s.push_back({std::move(name), get, set, affects});
        };
        add("data.train", [](const RunConfig& c) { return c.train_path.string(); },
            [](RunConfig& c, std::string_view v) { c.train_path = std::string(v); });
        add("data.test", [](const RunConfig& c) { return c.test_path.string(); },
            [](RunConfig& c, std::string_view v) { c.test_path = std::string(v); });
        add("data.schema", [](const RunConfig& c) { return c.schema_path.string(); },
            [](RunConfig& c, std::string_view v) { c.schema_path = std::string(v); });
        add("data.drop", [](const RunConfig& c) { return join(c.drop_columns, [](const std::string& x) { return x; }); },
            [](RunConfig& c, std::string_view v) { c.drop_columns = split_list(v); });
        add("out_dir", [](const RunConfig& c) { return c.out_dir.string(); },
            [](RunConfig& c, std::string_view v) {
                if (v.empty()) throw InputError("config: out_dir must not be empty");
                c.out_dir = std::string(v);
            },
            false);
        add("run.name", [](const RunConfig& c) { return c.run_name; },
            [](RunConfig& c, std::string_view v) {
                if (v.find('/') != std::string_view::npos || v == "." || v == "..") {
                    throw InputError("config: run.name must be a plain directory name");
                }
                c.run_name = std::string(v);
            },
            false);
        add("seed", [](const RunConfig& c) { return c.seed ? std::to_string(*c.seed) : std::string(); },
            [](RunConfig& c, std::string_view v) {
                if (v.empty()) c.seed.reset();
                else c.seed = parse_uint<std::uint64_t>("seed", v);
            });
        add("cv.k", [](const RunConfig& c) { return std::to_string(c.experiment.folds); },
            [](RunConfig& c, std::string_view v) { c.experiment.folds = parse_uint<std::size_t>("cv.k", v); });
        add("balance", [](const RunConfig& c) { return c.balance; },
            [](RunConfig& c, std::string_view v) {
                if (v != "undersample") throw InputError("config: balance supports only 'undersample'");
                c.balance = std::string(v);
            });
        add("subsample", [](const RunConfig& c) { return std::to_string(c.experiment.subsample); },
            [](RunConfig& c, std::string_view v) { c.experiment.subsample = parse_uint<std::size_t>("subsample", v); });
        add("modes",
            [](const RunConfig& c) { return join(c.experiment.modes, [](FeatureMode m) { return std::string(to_string(m)); }); },
            [](RunConfig& c, std::string_view v) {
                std::vector<FeatureMode> modes;
                for (const auto& item : split_list(v)) {
                    const auto m = parse_feature_mode(item);
                    if (std::find(modes.begin(), modes.end(), m) == modes.end()) modes.push_back(m);
                }
                if (modes.empty()) throw InputError("config: modes must list at least one feature mode");
                c.experiment.modes = modes;
            });
        add("classifiers",
            [](const RunConfig& c) {
                return join(c.experiment.classifiers, [](ClassifierKind k) { return std::string(to_string(k)); });
            },
            [](RunConfig& c, std::string_view v) {
                std::vector<ClassifierKind> kinds;
                for (const auto& item : split_list(v)) {
                    const auto k = parse_classifier_kind(item);
                    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
                }
                if (kinds.empty()) throw InputError("config: classifiers must list at least one classifier");
                c.experiment.classifiers = kinds;
            });
        add("ae.epochs", [](const RunConfig& c) { return std::to_string(c.experiment.train.epochs); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.epochs = parse_uint<std::size_t>("ae.epochs", v); });
        add("ae.batch", [](const RunConfig& c) { return std::to_string(c.experiment.train.batch_size); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.batch_size = parse_uint<std::size_t>("ae.batch", v); });
        add("ae.lr", [](const RunConfig& c) { return fmt_real(c.experiment.train.learning_rate); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.learning_rate = parse_real("ae.lr", v); });
        add("ae.beta1", [](const RunConfig& c) { return fmt_real(c.experiment.train.beta1); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.beta1 = parse_real("ae.beta1", v); });
        add("ae.beta2", [](const RunConfig& c) { return fmt_real(c.experiment.train.beta2); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.beta2 = parse_real("ae.beta2", v); });
        add("ae.epsilon", [](const RunConfig& c) { return fmt_real(c.experiment.train.epsilon); },
            [](RunConfig& c, std::string_view v) { c.experiment.train.epsilon = parse_real("ae.epsilon", v); });
        add("knn.k", [](const RunConfig& c) { return std::to_string(c.experiment.knn_k); },
            [](RunConfig& c, std::string_view v) { c.experiment.knn_k = parse_uint<std::size_t>("knn.k", v); });
        add("kmeans.seed", [](const RunConfig& c) { return std::to_string(c.experiment.kmeans.seed); },
            [](RunConfig& c, std::string_view v) { c.experiment.kmeans.seed = parse_uint<std::uint64_t>("kmeans.seed", v); });
        add("kmeans.max_iter", [](const RunConfig& c) { return std::to_string(c.experiment.kmeans.max_iter); },
            [](RunConfig& c, std::string_view v) {
                c.experiment.kmeans.max_iter = parse_uint<std::size_t>("kmeans.max_iter", v);
            });
        add("kmeans.tol", [](const RunConfig& c) { return fmt_real(c.experiment.kmeans.tol); },
            [](RunConfig& c, std::string_view v) { c.experiment.kmeans.tol = parse_real("kmeans.tol", v); });
        add("svm.c", [](const RunConfig& c) { return fmt_real(c.experiment.svm.c); },
            [](RunConfig& c, std::string_view v) { c.experiment.svm.c = parse_real("svm.c", v); });
        add("svm.gamma",
            [](const RunConfig& c) { return c.experiment.svm.gamma ? fmt_real(*c.experiment.svm.gamma) : "scale"; },
            [](RunConfig& c, std::string_view v) {
                if (v == "scale" || v.empty()) c.experiment.svm.gamma.reset();
                else c.experiment.svm.gamma = parse_real("svm.gamma", v);
            });
        add("svm.tol", [](const RunConfig& c) { return fmt_real(c.experiment.svm.tol); },
            [](RunConfig& c, std::string_view v) { c.experiment.svm.tol = parse_real("svm.tol", v); });
        add("svm.max_iter", [](const RunConfig& c) { return std::to_string(c.experiment.svm.max_iter); },
            [](RunConfig& c, std::string_view v) { c.experiment.svm.max_iter = parse_uint<std::size_t>("svm.max_iter", v); });
        add("svm.cache_mb", [](const RunConfig& c) { return std::to_string(c.experiment.svm.cache_mb); },
            [](RunConfig& c, std::string_view v) { c.experiment.svm.cache_mb = parse_uint<std::size_t>("svm.cache_mb", v); },
            false);
        add("reference.z_ac", [](const RunConfig& c) { return fmt_real(c.experiment.z_ac); },
            [](RunConfig& c, std::string_view v) { c.experiment.z_ac = parse_real("reference.z_ac", v); });
        add("reference.stats", [](const RunConfig& c) { return std::string(to_string(c.experiment.reference_stats)); },
            [](RunConfig& c, std::string_view v) { c.experiment.reference_stats = parse_reference_stats(v); });
        add("jobs", [](const RunConfig& c) { return std::to_string(c.experiment.jobs); },
            [](RunConfig& c, std::string_view v) {
                const auto j = parse_uint<std::size_t>("jobs", v);
                if (j == 0) throw InputError("config: jobs must be >= 1");
                c.experiment.jobs = j;
            },
            false);
        add("save_models", [](const RunConfig& c) { return std::string(c.save_models ? "true" : "false"); },
            [](RunConfig& c, std::string_view v) { c.save_models = parse_bool("save_models", v); }, false);
        return s;
    }();
    return specs;
}

const KeySpec& find_key(std::string_view key) {
    for (const auto& s : key_specs()) {
        if (s.name == key) return s;
    }
    throw InputError("config: unknown key '" + std::string(key) + "'");
}

bool same_svm(const SvmConfig& a, const SvmConfig& b) {
    return a.c == b.c && a.gamma == b.gamma && a.tol == b.tol && a.max_iter == b.max_iter && a.cache_mb == b.cache_mb;
}

bool same_train(const TrainConfig& a, const TrainConfig& b) {
    return a.epochs == b.epochs && a.batch_size == b.batch_size && a.learning_rate == b.learning_rate &&
           a.beta1 == b.beta1 && a.beta2 == b.beta2 && a.epsilon == b.epsilon && a.seed == b.seed;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
    const auto& x = a.experiment;
    const auto& y = b.experiment;
    return a.train_path == b.train_path && a.test_path == b.test_path && a.schema_path == b.schema_path &&
           a.drop_columns == b.drop_columns && a.out_dir == b.out_dir && a.run_name == b.run_name &&
           a.seed == b.seed && a.balance == b.balance && a.save_models == b.save_models && x.folds == y.folds &&
           same_train(x.train, y.train) && x.knn_k == y.knn_k && x.kmeans.clusters == y.kmeans.clusters &&
           x.kmeans.seed == y.kmeans.seed && x.kmeans.max_iter == y.kmeans.max_iter && x.kmeans.tol == y.kmeans.tol &&
           same_svm(x.svm, y.svm) && x.z_ac == y.z_ac && x.reference_stats == y.reference_stats && x.modes == y.modes &&
           x.classifiers == y.classifiers && x.subsample == y.subsample && x.jobs == y.jobs;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& s : key_specs()) k.push_back(s.name);
        return k;
    }();
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    find_key(trim(key)).set(config, trim(value));
}

void apply_assignment(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw InputError("config: expected key=value, got '" + std::string(assignment) + "'");
    apply_setting(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        try {
            apply_assignment(config, line);
        } catch (const InputError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ParseError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void apply_environment(RunConfig& config) {
    for (const auto& spec : key_specs()) {
        std::string var = "AEIDS_";
        for (char ch : spec.name) var += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (const char* value = std::getenv(var.c_str())) spec.set(config, trim(value));
    }
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    for (const auto& spec : key_specs()) {
        const auto value = spec.get(config);
        if (spec.name == "seed" && value.empty()) continue;
        out += spec.name + "=" + value + "\n";
    }
    return out;
}

std::string config_digest(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& spec : key_specs()) {
        if (!spec.affects_results) continue;
        for (char ch : spec.name + "=" + spec.get(config) + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string run_directory_name(const RunConfig& config) {
    return config.run_name.empty() ? "cfg-" + config_digest(config) : config.run_name;
}

ExperimentConfig effective_experiment(const RunConfig& config) {
    if (!config.seed) throw InputError("config: seed is mandatory (set seed=<integer>)");
    auto e = config.experiment;
    e.seed = *config.seed;
    return e;
}

}  // namespace aeids::cli
