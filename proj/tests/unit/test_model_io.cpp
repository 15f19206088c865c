#include <gtest/gtest.h>

#include <sstream>

#include "aeids/error.hpp"
#include "aeids/model_io.hpp"
#include "aeids/rng.hpp"

using namespace aeids;

namespace {

ModelBundle sample_bundle() {
    Rng rng(3);
    ModelBundle b;
    b.fold = 4;
    b.preprocess.schema = nslkdd_schema();
    b.preprocess.schema.vocabularies[1] = {"tcp", "udp", "icmp"};
    b.preprocess.schema.vocabularies[2] = {"http", "ftp"};
    b.preprocess.schema.vocabularies[3] = {"SF", "S0"};
    b.autoencoder = init_model(45, 8);
    b.preprocess.scaler.min.assign(45, 0.0);
    b.preprocess.scaler.max.assign(45, 1.0);
    b.preprocess.scaler.max[3] = 1e300;
    b.train.epochs = 3;
    b.train.seed = 77;
    b.loss_history = {0.5, 0.25, 0.125};

    ReferenceThreshold ref{0.1, 0.02, 0.0, 0.1};
    Matrix pts(5, 1);
    for (auto& v : pts.data()) v = rng.uniform();
    KnnModel knn{pts, {BinaryLabel::normal, BinaryLabel::anomalous, BinaryLabel::normal, BinaryLabel::normal,
                       BinaryLabel::anomalous},
                 3};
    KMeansModel km;
    km.centroids = Matrix(2, 16);
    km.centroids(1, 3) = 0.75;
    km.cluster_labels = {BinaryLabel::anomalous, BinaryLabel::normal};
    km.inertia_history = {3.0, 2.0, 2.0};
    km.inertia = 2.0;
    km.iterations = 2;
    km.converged = true;
    SvmModel svm;
    svm.support_vectors = Matrix(2, 17);
    svm.support_vectors(0, 0) = -0.0;
    svm.dual_coef = {0.5, -0.5};
    svm.bias = -0.1;
    svm.gamma = 0.3;
    svm.c = 1.0;
    svm.iterations = 12;
    b.classifiers = {{FeatureMode::re_only, ref},
                     {FeatureMode::re_only, knn},
                     {FeatureMode::sil_only, km},
                     {FeatureMode::re_and_sil, svm}};
    return b;
}

std::string serialized(const ModelBundle& b) {
    std::ostringstream out;
    save_model(out, b);
    return out.str();
}

}  // namespace

TEST(ModelIo, RoundTripIsExact) {
    const auto b = sample_bundle();
    const auto bytes = serialized(b);
    EXPECT_EQ(bytes.substr(0, 8), "AEIDSMDL");
    std::istringstream in(bytes);
    const auto back = load_model(in);
    EXPECT_EQ(back.fold, 4u);
    EXPECT_EQ(back.autoencoder, b.autoencoder);
    EXPECT_EQ(back.preprocess.scaler, b.preprocess.scaler);
    EXPECT_EQ(back.preprocess.schema.columns, b.preprocess.schema.columns);
    EXPECT_EQ(back.preprocess.schema.vocabularies, b.preprocess.schema.vocabularies);
    EXPECT_EQ(back.loss_history, b.loss_history);
    EXPECT_EQ(back.train.seed, 77u);
    ASSERT_EQ(back.classifiers.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(back.classifiers[i].kind(), b.classifiers[i].kind());
        EXPECT_EQ(back.classifiers[i].mode, b.classifiers[i].mode);
    }
    EXPECT_EQ(std::get<KnnModel>(back.classifiers[1].model).points, std::get<KnnModel>(b.classifiers[1].model).points);
    EXPECT_EQ(std::get<KMeansModel>(back.classifiers[2].model).inertia_history,
              std::get<KMeansModel>(b.classifiers[2].model).inertia_history);
    EXPECT_EQ(std::get<SvmModel>(back.classifiers[3].model).dual_coef,
              std::get<SvmModel>(b.classifiers[3].model).dual_coef);
    EXPECT_EQ(serialized(back), bytes);
}

TEST(ModelIo, VersionHeaderIsLittleEndian) {
    const auto bytes = serialized(sample_bundle());
    EXPECT_EQ(static_cast<unsigned char>(bytes[8]), kModelFormatVersion);
    EXPECT_EQ(bytes[9], 0);
    EXPECT_EQ(bytes[10], 0);
    EXPECT_EQ(bytes[11], 0);
}

TEST(ModelIo, RejectsOtherVersion) {
    auto bytes = serialized(sample_bundle());
    bytes[8] = 2;
    std::istringstream in(bytes);
    EXPECT_THROW(load_model(in), VersionMismatch);
}

TEST(ModelIo, RejectsTruncatedAndForeignFiles) {
    const auto bytes = serialized(sample_bundle());
    for (std::size_t cut : {std::size_t{4}, std::size_t{12}, bytes.size() / 2, bytes.size() - 1}) {
        std::istringstream in(bytes.substr(0, cut));
        EXPECT_THROW(load_model(in), InputError) << "cut at " << cut;
    }
    std::istringstream foreign("NOTAMODELFILE...");
    EXPECT_THROW(load_model(foreign), InputError);
    EXPECT_THROW(load_model(std::filesystem::path("/nonexistent/model")), InputError);
}
