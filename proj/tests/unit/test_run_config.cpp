#include <gtest/gtest.h>

#include <cstdlib>

#include "aeids/error.hpp"
#include "run_config.hpp"

using namespace aeids;
using namespace aeids::cli;

TEST(RunConfig, DefaultsRoundTrip) {
    const RunConfig defaults;
    EXPECT_EQ(parse_config(serialize_config(defaults)), defaults);
    EXPECT_EQ(defaults.drop_columns, std::vector<std::string>{"service"});
    EXPECT_EQ(defaults.experiment.folds, 10u);
    EXPECT_EQ(defaults.experiment.train.epochs, 50u);
    EXPECT_EQ(defaults.experiment.train.batch_size, 256u);
    EXPECT_EQ(defaults.experiment.train.learning_rate, 1e-4);
    EXPECT_EQ(defaults.experiment.knn_k, 11u);
}

TEST(RunConfig, EveryKeyRoundTrips) {
    const auto cfg = parse_config(
        "# comment\n"
        "data.train = /d/KDDTrain+.txt\n"
        "data.test=/d/KDDTest+.txt\n"
        "data.drop=service,land\n"
        "out_dir=results\n"
        "run.name=trial\n"
        "seed=18446744073709551615\n"
        "cv.k=5\n"
        "subsample=5000\n"
        "modes=re_only,sil_only\n"
        "classifiers=knn,svm\n"
        "ae.epochs=5\n"
        "ae.batch=128\n"
        "ae.lr=0.001\n"
        "knn.k=7\n"
        "kmeans.seed=3\n"
        "kmeans.tol=1e-06\n"
        "svm.c=2.5\n"
        "svm.gamma=0.125\n"
        "reference.z_ac=0.1\n"
        "reference.stats=normal_only\n"
        "jobs=4\n"
        "save_models=false\n");
    EXPECT_EQ(cfg.train_path, "/d/KDDTrain+.txt");
    EXPECT_EQ(cfg.drop_columns, (std::vector<std::string>{"service", "land"}));
    EXPECT_EQ(*cfg.seed, 18446744073709551615ULL);
    EXPECT_EQ(cfg.experiment.modes, (std::vector<FeatureMode>{FeatureMode::re_only, FeatureMode::sil_only}));
    EXPECT_EQ(cfg.experiment.svm.gamma, 0.125);
    EXPECT_EQ(cfg.experiment.train.learning_rate, 0.001);
    EXPECT_EQ(cfg.experiment.reference_stats, ReferenceStats::normal_only);
    EXPECT_FALSE(cfg.save_models);
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
    EXPECT_EQ(serialize_config(parse_config(serialize_config(cfg))), serialize_config(cfg));

    auto scale = cfg;
    apply_setting(scale, "svm.gamma", "scale");
    EXPECT_FALSE(scale.experiment.svm.gamma);
    EXPECT_EQ(parse_config(serialize_config(scale)), scale);
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
    try {
        parse_config("seed=1\n\nae.epochs=many\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_config("no_such_key=1\n"), ParseError);
    EXPECT_THROW(parse_config("seed\n"), ParseError);
    EXPECT_THROW(parse_config("modes=re_only,extra\n"), ParseError);
    EXPECT_THROW(parse_config("jobs=0\n"), ParseError);
    EXPECT_THROW(parse_config("cv.k=-3\n"), ParseError);
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), InputError);
}

TEST(RunConfig, DigestIgnoresBookkeepingKeys) {
    RunConfig a;
    a.seed = 1;
    auto b = a;
    b.out_dir = "elsewhere";
    b.experiment.jobs = 8;
    b.save_models = false;
    EXPECT_EQ(config_digest(a), config_digest(b));
    b.experiment.train.epochs = 5;
    EXPECT_NE(config_digest(a), config_digest(b));
    EXPECT_EQ(run_directory_name(a), "cfg-" + config_digest(a));
    EXPECT_EQ(config_digest(a).size(), 16u);
    a.run_name = "named";
    EXPECT_EQ(run_directory_name(a), "named");
}

TEST(RunConfig, SeedIsMandatoryForRuns) {
    RunConfig c;
    EXPECT_THROW(effective_experiment(c), InputError);
    c.seed = 42;
    EXPECT_EQ(effective_experiment(c).seed, 42u);
}

TEST(RunConfig, EnvironmentOverrides) {
    ::setenv("AEIDS_AE_EPOCHS", "3", 1);
    ::setenv("AEIDS_KNN_K", "5", 1);
    RunConfig c;
    apply_environment(c);
    ::unsetenv("AEIDS_AE_EPOCHS");
    ::unsetenv("AEIDS_KNN_K");
    EXPECT_EQ(c.experiment.train.epochs, 3u);
    EXPECT_EQ(c.experiment.knn_k, 5u);
}
