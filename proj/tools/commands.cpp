#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "aeids/error.hpp"
#include "aeids/experiment.hpp"
#include "aeids/model_io.hpp"
#include "aeids/preprocess.hpp"
#include "aeids/report.hpp"

namespace aeids::cli {
namespace fs = std::filesystem;

namespace {

void require_file(const fs::path& path, const char* what) {
    if (path.empty()) throw InputError(std::string(what) + " path is not set");
    if (!fs::is_regular_file(path)) throw InputError("file not found: " + path.string());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

void write_schema_file(const fs::path& path, const FeatureSchema& schema) {
    auto out = open_out(path);
    for (const auto& c : schema.columns) {
        out << c.name << ',' << (c.kind == ColumnKind::numeric ? "numeric" : "categorical") << '\n';
    }
    out << schema.label_column << ",label\n";
    if (!schema.difficulty_column.empty()) out << schema.difficulty_column << ",difficulty\n";
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (line.empty() || line.front() == '#' || eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::size_t to_size(const std::map<std::string, std::string>& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InputError("manifest: missing " + key);
    try {
        return static_cast<std::size_t>(std::stoull(it->second));
    } catch (const std::exception&) {
        throw InputError("manifest: bad value for " + key);
    }
}

std::string two_digits(std::size_t n) {
    return (n < 10 ? "0" : "") + std::to_string(n);
}

}  // namespace

fs::path prepared_dir(const RunConfig& config) { return config.out_dir / "prepared"; }

fs::path run_dir(const RunConfig& config) { return config.out_dir / "runs" / run_directory_name(config); }

PreparedManifest cmd_prepare(const RunConfig& config, std::ostream& log) {
    require_file(config.train_path, "data.train");
    require_file(config.test_path, "data.test");
    const FeatureSchema schema = config.schema_path.empty() ? nslkdd_schema() : load_schema(config.schema_path);

    Dataset train{schema, parse_nslkdd(config.train_path, schema)};
    Dataset test{schema, parse_nslkdd(config.test_path, schema)};
    log << "parsed " << train.records.size() << " records from " << config.train_path.string() << '\n';
    log << "parsed " << test.records.size() << " records from " << config.test_path.string() << '\n';

    Dataset all = concat_datasets(train, test);
    for (const auto& name : config.drop_columns) all = drop_feature(std::move(all), name);
    build_vocabularies(all);
    const OneHotEncoder encoder(all.schema);

    PreparedManifest m;
    m.dir = prepared_dir(config);
    m.train_records = train.records.size();
    m.test_records = test.records.size();
    m.total_records = all.records.size();
    for (const auto& r : all.records) (r.binary_label() == BinaryLabel::normal ? m.normal : m.anomalous)++;
    m.encoded_dimension = encoder.dimension();
    m.dropped = config.drop_columns;

    fs::create_directories(m.dir);
    write_schema_file(m.dir / "schema.txt", all.schema);
    {
        auto out = open_out(m.dir / "records.csv");
        for (const auto& r : all.records) out << to_line(r, all.schema) << '\n';
    }
    {
        auto out = open_out(m.dir / "vocabulary.txt");
        out << "# column,kind,size,categories (first-seen order over train+test)\n";
        for (std::size_t c = 0; c < all.schema.columns.size(); ++c) {
            if (all.schema.columns[c].kind != ColumnKind::categorical) continue;
            const auto& vocab = all.schema.vocabularies[c];
            out << all.schema.columns[c].name << ",categorical," << vocab.size();
            for (const auto& v : vocab) out << ',' << v;
            out << '\n';
        }
        for (const auto& name : config.drop_columns) out << name << ",dropped\n";
        out << "# encoded dimension N=" << m.encoded_dimension << '\n';
    }
    {
        auto out = open_out(m.dir / "manifest.txt");
        out << "format=" << kPreparedFormat << '\n';
        out << "train=" << config.train_path.string() << '\n';
        out << "test=" << config.test_path.string() << '\n';
        out << "train_records=" << m.train_records << '\n';
        out << "test_records=" << m.test_records << '\n';
        out << "total_records=" << m.total_records << '\n';
        out << "normal=" << m.normal << '\n';
        out << "anomalous=" << m.anomalous << '\n';
        out << "dropped=";
        for (std::size_t i = 0; i < m.dropped.size(); ++i) out << (i ? "," : "") << m.dropped[i];
        out << '\n';
        out << "encoded_dimension=" << m.encoded_dimension << '\n';
    }
    log << "wrote " << m.total_records << " records (" << m.normal << " normal, " << m.anomalous
        << " anomalous), N=" << m.encoded_dimension << " to " << m.dir.string() << '\n';
    return m;
}

PreparedManifest read_manifest(const fs::path& dir) {
    const auto kv = read_key_values(dir / "manifest.txt");
    const auto fmt = kv.find("format");
    if (fmt == kv.end() || fmt->second.rfind("aeids-prepared", 0) != 0) {
        throw InputError("not a prepared dataset: " + dir.string());
    }
    if (fmt->second != kPreparedFormat) {
        throw VersionMismatch("prepared dataset format '" + fmt->second + "', expected '" + kPreparedFormat + "'");
    }
    PreparedManifest m;
    m.dir = dir;
    m.train_records = to_size(kv, "train_records");
    m.test_records = to_size(kv, "test_records");
    m.total_records = to_size(kv, "total_records");
    m.normal = to_size(kv, "normal");
    m.anomalous = to_size(kv, "anomalous");
    m.encoded_dimension = to_size(kv, "encoded_dimension");
    if (const auto it = kv.find("dropped"); it != kv.end()) {
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) m.dropped.push_back(item);
        }
    }
    return m;
}

Dataset load_prepared(const fs::path& dir) {
    if (!fs::exists(dir / "manifest.txt")) {
        throw InputError("no prepared dataset at " + dir.string() + " (run `aeids prepare` first)");
    }
    const auto manifest = read_manifest(dir);
    Dataset data;
    data.schema = load_schema(dir / "schema.txt");
    data.records = parse_nslkdd(dir / "records.csv", data.schema);
    if (data.records.size() != manifest.total_records) {
        throw InputError("prepared dataset is inconsistent: manifest lists " + std::to_string(manifest.total_records) +
                         " records, store has " + std::to_string(data.records.size()));
    }
    build_vocabularies(data);
    return data;
}

fs::path cmd_run(const RunConfig& config, std::ostream& log) {
    const ExperimentConfig experiment = effective_experiment(config);
    const Dataset data = load_prepared(prepared_dir(config));

    const fs::path dir = run_dir(config);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "effective.cfg");
        out << serialize_config(config);
    }
    if (config.save_models) fs::create_directories(dir / "models");

    ExperimentHooks hooks;
    hooks.on_progress = [&](std::string_view msg) { log << msg << std::endl; };
    hooks.on_fold = [&](const FoldArtifacts& art) {
        if (!config.save_models) return;
        ModelBundle bundle;
        bundle.fold = art.fold;
        bundle.preprocess = art.preprocess;
        bundle.autoencoder = art.autoencoder;
        bundle.train = art.train;
        bundle.loss_history = art.loss_history;
        bundle.classifiers = art.classifiers;
        save_model(dir / "models" / ("fold_" + two_digits(art.fold + 1) + ".model"), bundle);
    };
    const auto summary = run_experiment(data, experiment, hooks);

    {
        auto out = open_out(dir / "summary.csv");
        write_summary(out, summary);
    }
    {
        auto out = open_out(dir / "folds.txt");
        write_fold_details(out, summary);
    }
    {
        auto out = open_out(dir / "report.txt");
        render_report(out, summary);
    }
    log << "results written to " << dir.string() << '\n';
    return dir;
}

void cmd_report(const fs::path& summary_path, std::ostream& out) {
    render_report(out, read_summary(summary_path));
}

void cmd_inspect_model(const fs::path& model_path, std::ostream& out) {
    const auto bundle = load_model(model_path);
    out << "model file: " << model_path.string() << " (format v" << kModelFormatVersion << ")\n";
    out << "fold: " << bundle.fold + 1 << '\n';
    out << "topology:";
    for (auto s : bundle.autoencoder.sizes()) out << ' ' << s;
    out << " (ReLU on every layer, " << bundle.autoencoder.parameter_count() << " parameters)\n";
    out << "training: epochs=" << bundle.train.epochs << " batch=" << bundle.train.batch_size
        << " lr=" << bundle.train.learning_rate << " seed=" << bundle.train.seed << '\n';
    if (!bundle.loss_history.empty()) {
        out << "loss: first=" << bundle.loss_history.front() << " last=" << bundle.loss_history.back() << '\n';
    }
    std::size_t categorical = 0;
    for (const auto& c : bundle.preprocess.schema.columns) categorical += c.kind == ColumnKind::categorical;
    out << "schema: " << bundle.preprocess.schema.columns.size() << " columns (" << categorical
        << " categorical), encoded N=" << bundle.preprocess.scaler.dimension() << '\n';
    out << "classifiers:\n";
    for (const auto& clf : bundle.classifiers) {
        out << "  " << to_string(clf.kind()) << " on " << to_string(clf.mode) << " (dim " << clf.input_dim() << "): ";
        if (const auto* m = std::get_if<ReferenceThreshold>(&clf.model)) {
            out << "mean=" << m->mean << " std=" << m->stddev << " z_ac=" << m->z_ac << " threshold=" << m->threshold;
        } else if (const auto* m = std::get_if<KnnModel>(&clf.model)) {
            out << "k=" << m->k << " stored=" << m->points.rows();
        } else if (const auto* m = std::get_if<KMeansModel>(&clf.model)) {
            out << "clusters=" << m->centroids.rows() << " iterations=" << m->iterations << " inertia=" << m->inertia
                << (m->converged ? "" : " (not converged)") << " labels=";
            for (std::size_t c = 0; c < m->cluster_labels.size(); ++c) out << (c ? "," : "") << to_string(m->cluster_labels[c]);
        } else if (const auto* m = std::get_if<SvmModel>(&clf.model)) {
            out << "support_vectors=" << m->support_vectors.rows() << " C=" << m->c << " gamma=" << m->gamma
                << " bias=" << m->bias << " iterations=" << m->iterations << (m->converged ? "" : " (not converged)");
        }
        out << '\n';
    }
}

void cmd_dump_features(const fs::path& model_path, const fs::path& records_path, FeatureMode mode,
                       const fs::path& output_path) {
    const auto bundle = load_model(model_path);
    require_file(records_path, "records");
    const auto& model_schema = bundle.preprocess.schema;

    std::ifstream probe(records_path);
    std::string first;
    while (std::getline(probe, first) && first.find_first_not_of(" \t\r") == std::string::npos) {
    }
    const auto arity = static_cast<std::size_t>(std::count(first.begin(), first.end(), ',')) + 1;

    Dataset data;
    if (arity == model_schema.field_count()) {
        data = {model_schema, parse_nslkdd(records_path, model_schema)};
    } else {
        // Raw file: parse with the full built-in schema and drop what the model never saw.
        const auto full = nslkdd_schema();
        data = {full, parse_nslkdd(records_path, full)};
        for (const auto& c : full.columns) {
            if (!model_schema.index_of(c.name)) data = drop_feature(std::move(data), c.name);
        }
        if (!data.schema.same_layout(model_schema)) throw InputError("records do not match the model's schema");
    }
    const OneHotEncoder encoder(model_schema);
    Matrix x = encoder.encode_all(data.records);
    apply_minmax_inplace(x, bundle.preprocess.scaler);
    const Matrix features = extract_all(bundle.autoencoder, x, mode);
    auto out = open_out(output_path);
    write_feature_dump(out, features, mode);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"aeids: autoencoder features with learned detection thresholds for network intrusion data"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key=value config file");
    app.add_option("-s,--set", overrides, "Override a config key (key=value), repeatable");

    auto* prepare = app.add_subcommand("prepare", "Concatenate and validate the dataset files");
    std::string train_path, test_path, out_dir;
    prepare->add_option("--train", train_path, "Training file (data.train)");
    prepare->add_option("--test", test_path, "Test file (data.test)");
    prepare->add_option("--out", out_dir, "Output directory (out_dir)");

    auto* run = app.add_subcommand("run", "Run the cross-validated experiment on a prepared dataset");
    std::string subsample, epochs, modes, folds, seed, jobs, name;
    run->add_option("--subsample", subsample, "Cap on records used (subsample)");
    run->add_option("--epochs", epochs, "Autoencoder epochs (ae.epochs)");
    run->add_option("--modes", modes, "Feature modes, comma-separated (modes)");
    run->add_option("--folds", folds, "Number of folds (cv.k)");
    run->add_option("--seed", seed, "Master seed (seed)");
    run->add_option("--jobs", jobs, "Folds processed concurrently (jobs)");
    run->add_option("--name", name, "Run directory name (run.name)");
    run->add_option("--out", out_dir, "Output directory (out_dir)");

    auto* report = app.add_subcommand("report", "Render the tables of a summary file");
    std::string summary_path;
    report->add_option("summary", summary_path, "summary.csv written by `run`")->required();

    auto* inspect = app.add_subcommand("inspect-model", "Describe a saved fold model");
    std::string model_path, dump_records, dump_mode = "re_and_sil", dump_output;
    inspect->add_option("model", model_path, "Model file")->required();
    inspect->add_option("--dump-features", dump_records, "Record file to score");
    inspect->add_option("--mode", dump_mode, "Feature mode for the dump");
    inspect->add_option("--output", dump_output, "Feature dump destination");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (report->parsed()) {
            cmd_report(summary_path, out);
            return kExitOk;
        }
        if (inspect->parsed()) {
            if (dump_records.empty()) {
                cmd_inspect_model(model_path, out);
            } else {
                if (dump_output.empty()) throw InputError("--dump-features needs --output");
                cmd_dump_features(model_path, dump_records, parse_feature_mode(dump_mode), dump_output);
                out << "features written to " << dump_output << '\n';
            }
            return kExitOk;
        }

        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        apply_environment(config);
        for (const auto& o : overrides) apply_assignment(config, o);
        const std::pair<const std::string*, const char*> flags[] = {
            {&train_path, "data.train"}, {&test_path, "data.test"}, {&out_dir, "out_dir"},
            {&subsample, "subsample"},   {&epochs, "ae.epochs"},    {&modes, "modes"},
            {&folds, "cv.k"},            {&seed, "seed"},           {&jobs, "jobs"},
            {&name, "run.name"},
        };
        for (const auto& [value, key] : flags) {
            if (!value->empty()) apply_setting(config, key, *value);
        }

        if (prepare->parsed()) {
            cmd_prepare(config, out);
        } else if (run->parsed()) {
            cmd_run(config, out);
        }
        return kExitOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace aeids::cli
