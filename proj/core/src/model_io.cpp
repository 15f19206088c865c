#include "aeids/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "aeids/error.hpp"

namespace aeids {
namespace {

constexpr std::array<char, 8> kMagic{'A', 'E', 'I', 'D', 'S', 'M', 'D', 'L'};
// Sanity bound on any length prefix; guards allocation on corrupt input.
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 34;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u32(std::uint32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        out_.write(reinterpret_cast<const char*>(b), 4);
    }
    void u64(std::uint64_t v) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
        out_.write(reinterpret_cast<const char*>(b), 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void reals(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
    void matrix(const Matrix& m) {
        u64(m.rows());
        u64(m.cols());
        for (double x : m.data()) f64(x);
    }
    void labels(const std::vector<BinaryLabel>& v) {
        u64(v.size());
        for (auto l : v) u64(static_cast<std::uint64_t>(l));
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw InputError("model file: truncated");
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        unsigned char b[8];
        bytes(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
        return v;
    }
    std::uint64_t count() {
        const auto n = u64();
        if (n > kMaxCount) throw InputError("model file: corrupt length field");
        return n;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        std::string s(count(), '\0');
        if (!s.empty()) bytes(s.data(), s.size());
        return s;
    }
    std::vector<double> reals() {
        std::vector<double> v(count());
        for (auto& x : v) x = f64();
        return v;
    }
    Matrix matrix() {
        const auto rows = count();
        const auto cols = count();
        if (rows * cols > kMaxCount) throw InputError("model file: corrupt matrix shape");
        Matrix m(rows, cols);
        for (auto& x : m.data()) x = f64();
        return m;
    }
    BinaryLabel label() {
        const auto v = u64();
        if (v > 1) throw InputError("model file: bad label value");
        return static_cast<BinaryLabel>(v);
    }
    std::vector<BinaryLabel> labels() {
        std::vector<BinaryLabel> v(count());
        for (auto& l : v) l = label();
        return v;
    }

private:
    std::istream& in_;
};

void write_schema(Writer& w, const FeatureSchema& schema) {
    w.u64(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        w.str(schema.columns[c].name);
        w.u64(static_cast<std::uint64_t>(schema.columns[c].kind));
        const auto& vocab = c < schema.vocabularies.size() ? schema.vocabularies[c] : std::vector<std::string>{};
        w.u64(vocab.size());
        for (const auto& v : vocab) w.str(v);
    }
    w.str(schema.label_column);
    w.str(schema.difficulty_column);
}

FeatureSchema read_schema(Reader& r) {
    FeatureSchema schema;
    const auto n = r.count();
    for (std::uint64_t c = 0; c < n; ++c) {
        Column col;
        col.name = r.str();
        const auto kind = r.u64();
        if (kind > 1) throw InputError("model file: bad column kind");
        col.kind = static_cast<ColumnKind>(kind);
        schema.columns.push_back(std::move(col));
        std::vector<std::string> vocab(r.count());
        for (auto& v : vocab) v = r.str();
        schema.vocabularies.push_back(std::move(vocab));
    }
    schema.label_column = r.str();
    schema.difficulty_column = r.str();
    return schema;
}

void write_classifier(Writer& w, const ClassifierModel& clf) {
    w.u64(static_cast<std::uint64_t>(clf.kind()));
    w.u64(static_cast<std::uint64_t>(clf.mode));
    if (const auto* m = std::get_if<ReferenceThreshold>(&clf.model)) {
        w.f64(m->mean);
        w.f64(m->stddev);
        w.f64(m->z_ac);
        w.f64(m->threshold);
    } else if (const auto* m = std::get_if<KnnModel>(&clf.model)) {
        w.u64(m->k);
        w.matrix(m->points);
        w.labels(m->labels);
    } else if (const auto* m = std::get_if<KMeansModel>(&clf.model)) {
        w.matrix(m->centroids);
        w.labels(m->cluster_labels);
        w.reals(m->inertia_history);
        w.f64(m->inertia);
        w.u64(m->iterations);
        w.u64(m->converged ? 1 : 0);
    } else if (const auto* m = std::get_if<SvmModel>(&clf.model)) {
        w.matrix(m->support_vectors);
        w.reals(m->dual_coef);
        w.f64(m->bias);
        w.f64(m->gamma);
        w.f64(m->c);
        w.u64(m->iterations);
        w.u64(m->converged ? 1 : 0);
    }
}

ClassifierModel read_classifier(Reader& r) {
    const auto kind = r.u64();
    const auto mode = r.u64();
    if (kind > 3 || mode > 2) throw InputError("model file: bad classifier header");
    ClassifierModel clf;
    clf.mode = static_cast<FeatureMode>(mode);
    switch (static_cast<ClassifierKind>(kind)) {
        case ClassifierKind::reference: {
            ReferenceThreshold m;
            m.mean = r.f64();
            m.stddev = r.f64();
            m.z_ac = r.f64();
            m.threshold = r.f64();
            clf.model = m;
            break;
        }
        case ClassifierKind::knn: {
            KnnModel m;
            m.k = r.u64();
            m.points = r.matrix();
            m.labels = r.labels();
            if (m.labels.size() != m.points.rows() || m.k == 0 || m.k > m.points.rows()) {
                throw InputError("model file: inconsistent knn section");
            }
            clf.model = std::move(m);
            break;
        }
        case ClassifierKind::kmeans: {
            KMeansModel m;
            m.centroids = r.matrix();
            m.cluster_labels = r.labels();
            m.inertia_history = r.reals();
            m.inertia = r.f64();
            m.iterations = r.u64();
            m.converged = r.u64() != 0;
            if (m.cluster_labels.size() != m.centroids.rows()) throw InputError("model file: inconsistent kmeans section");
            clf.model = std::move(m);
            break;
        }
        case ClassifierKind::svm: {
            SvmModel m;
            m.support_vectors = r.matrix();
            m.dual_coef = r.reals();
            m.bias = r.f64();
            m.gamma = r.f64();
            m.c = r.f64();
            m.iterations = r.u64();
            m.converged = r.u64() != 0;
            if (m.dual_coef.size() != m.support_vectors.rows()) throw InputError("model file: inconsistent svm section");
            clf.model = std::move(m);
            break;
        }
    }
    return clf;
}

}  // namespace

void save_model(std::ostream& out, const ModelBundle& bundle) {
    Writer w(out);
    out.write(kMagic.data(), kMagic.size());
    w.u32(kModelFormatVersion);

    w.u64(bundle.fold);
    write_schema(w, bundle.preprocess.schema);
    w.reals(bundle.preprocess.scaler.min);
    w.reals(bundle.preprocess.scaler.max);

    const auto& layers = bundle.autoencoder.layers();
    w.u64(layers.size());
    for (const auto& l : layers) {
        w.u64(l.inputs);
        w.u64(l.outputs);
        for (double x : l.weights) w.f64(x);
        for (double x : l.bias) w.f64(x);
    }

    w.u64(bundle.train.epochs);
    w.u64(bundle.train.batch_size);
    w.f64(bundle.train.learning_rate);
    w.f64(bundle.train.beta1);
    w.f64(bundle.train.beta2);
    w.f64(bundle.train.epsilon);
    w.u64(bundle.train.seed);
    w.reals(bundle.loss_history);

    w.u64(bundle.classifiers.size());
    for (const auto& c : bundle.classifiers) write_classifier(w, c);
    if (!out) throw Error("model file: write failed");
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    save_model(out, bundle);
}

ModelBundle load_model(std::istream& in) {
    Reader r(in);
    std::array<char, 8> magic{};
    r.bytes(magic.data(), magic.size());
    if (magic != kMagic) throw InputError("model file: bad magic (not an aeids model)");
    const auto version = r.u32();
    if (version != kModelFormatVersion) {
        throw VersionMismatch("model file: format version " + std::to_string(version) + ", expected " +
                              std::to_string(kModelFormatVersion));
    }
    ModelBundle b;
    b.fold = r.u64();
    b.preprocess.schema = read_schema(r);
    b.preprocess.scaler.min = r.reals();
    b.preprocess.scaler.max = r.reals();
    if (b.preprocess.scaler.min.size() != b.preprocess.scaler.max.size()) {
        throw InputError("model file: inconsistent scaler");
    }

    std::vector<DenseLayer> layers(r.count());
    for (auto& l : layers) {
        l.inputs = r.count();
        l.outputs = r.count();
        if (l.inputs * l.outputs > kMaxCount) throw InputError("model file: corrupt layer shape");
        l.weights.resize(l.inputs * l.outputs);
        l.bias.resize(l.outputs);
        for (auto& x : l.weights) x = r.f64();
        for (auto& x : l.bias) x = r.f64();
    }
    b.autoencoder = Autoencoder::from_layers(std::move(layers));

    b.train.epochs = r.u64();
    b.train.batch_size = r.u64();
    b.train.learning_rate = r.f64();
    b.train.beta1 = r.f64();
    b.train.beta2 = r.f64();
    b.train.epsilon = r.f64();
    b.train.seed = r.u64();
    b.loss_history = r.reals();

    const auto n = r.count();
    for (std::uint64_t i = 0; i < n; ++i) b.classifiers.push_back(read_classifier(r));
    return b;
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("file not found: " + path.string());
    return load_model(in);
}

}  // namespace aeids
