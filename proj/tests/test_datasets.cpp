#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "spa/dataset.hpp"
#include "spa/errors.hpp"
#include "support/oracles.hpp"

using namespace spa;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {}
    ~TempFile() { std::filesystem::remove(path); }
    void write(const std::string& content) {
        std::ofstream out(path);
        out << content;
    }
    std::string str() const { return path.string(); }
};

// Minimum distance from x to the parametric class curve: coarse parameter
// scan plus ternary refinement of the bracketing interval.
double min_distance_to_curve(CurveFamily family, int label, const Vector& x,
                             int ambient_dim) {
    constexpr int kGrid = 4096;
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
    double best = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double t = kTwoPi * i / kGrid;
        const double d = (x - curve_point(family, label, t, ambient_dim)).norm();
        if (d < best) {
            best = d;
            best_t = t;
        }
    }
    double lo = best_t - kTwoPi / kGrid;
    double hi = best_t + kTwoPi / kGrid;
    for (int iter = 0; iter < 200; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double d1 = (x - curve_point(family, label, m1, ambient_dim)).norm();
        const double d2 = (x - curve_point(family, label, m2, ambient_dim)).norm();
        if (d1 < d2) hi = m2; else lo = m1;
    }
    const double mid = 0.5 * (lo + hi);
    return std::min(best, (x - curve_point(family, label, mid, ambient_dim)).norm());
}

} // namespace

TEST_SUITE("load_csv") {

TEST_CASE("three rows, label first") {
    TempFile f("spa_t_basic.csv");
    f.write("1,0.5,0.2\n2,0.1,0.9\n1,0.4,0.3\n");
    auto data = load_csv(f.str(), LabelColumn::first);
    CHECK(data.size() == 3);
    CHECK(data.dim() == 2);
    CHECK(data.distinct_labels() == std::vector<int>{1, 2});
    CHECK(data.features(0, 0) == doctest::Approx(0.5));
    CHECK(data.features(2, 1) == doctest::Approx(0.3));
    CHECK(data.labels == std::vector<int>{1, 2, 1});
}

TEST_CASE("label last") {
    TempFile f("spa_t_last.csv");
    f.write("0.5,0.2,7\n0.1,0.9,9\n");
    auto data = load_csv(f.str(), LabelColumn::last);
    CHECK(data.labels == std::vector<int>{7, 9});
    CHECK(data.features(1, 0) == doctest::Approx(0.1));
}

TEST_CASE("header row autodetected") {
    TempFile f("spa_t_header.csv");
    f.write("label,x1,x2\n1,0.5,0.2\n2,0.1,0.9\n");
    auto data = load_csv(f.str(), LabelColumn::first);
    CHECK(data.size() == 2);
    CHECK(data.dim() == 2);
}

TEST_CASE("non-numeric feature cell names the location") {
    TempFile f("spa_t_bad.csv");
    f.write("1,0.5,0.2\n2,oops,0.9\n");
    CHECK_THROWS_WITH_AS(load_csv(f.str(), LabelColumn::first),
                         doctest::Contains("row 2"), ParseError);
}

TEST_CASE("ragged rows rejected") {
    TempFile f("spa_t_ragged.csv");
    f.write("1,0.5,0.2\n2,0.1\n");
    CHECK_THROWS_AS(load_csv(f.str(), LabelColumn::first), ParseError);
}

TEST_CASE("empty file rejected") {
    TempFile f("spa_t_empty.csv");
    f.write("");
    CHECK_THROWS_AS(load_csv(f.str(), LabelColumn::first), ParseError);
}

TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_csv("/nonexistent/really_not_here.csv", LabelColumn::first),
                    IoError);
}

TEST_CASE("string categories get stable lexicographic codes") {
    TempFile f("spa_t_cats.csv");
    f.write("0.5,0.2,dog\n0.1,0.9,cat\n0.2,0.2,dog\n");
    auto data = load_csv(f.str(), LabelColumn::last);
    CHECK(data.labels == std::vector<int>{2, 1, 2}); // cat=1, dog=2
    CHECK(data.label_names.at(1) == "cat");
    CHECK(data.label_names.at(2) == "dog");
}

TEST_CASE("non-finite feature values rejected") {
    TempFile f("spa_t_nan.csv");
    f.write("1,0.5,nan\n");
    CHECK_THROWS_AS(load_csv(f.str(), LabelColumn::first), ParseError);
}

TEST_CASE("libras-shaped file: 15 classes, 24 rows each, label last") {
    TempFile f("spa_t_libras_shape.csv");
    std::string content;
    for (int cls = 1; cls <= 15; ++cls) {
        for (int i = 0; i < 24; ++i) {
            std::string row;
            for (int j = 0; j < 90; ++j) row += std::to_string(0.01 * (j + cls)) + ",";
            row += std::to_string(cls);
            content += row + "\n";
        }
    }
    f.write(content);
    auto data = load_csv(f.str(), LabelColumn::last);
    CHECK(data.size() == 360);
    CHECK(data.dim() == 90);
    CHECK(data.distinct_labels().size() == 15);
    for (int cls = 1; cls <= 15; ++cls) CHECK(data.class_count(cls) == 24);
}

} // TEST_SUITE

TEST_SUITE("write_csv round trip") {

TEST_CASE("features reproduce to full precision, labels exactly") {
    Rng rng(17);
    LabeledDataset data;
    data.features.resize(23, 4);
    for (Index i = 0; i < data.features.rows(); ++i) {
        for (Index j = 0; j < data.features.cols(); ++j) {
            data.features(i, j) = rng.normal() * std::pow(10.0, rng.uniform(-8.0, 8.0));
        }
        data.labels.push_back(1 + static_cast<int>(rng.below(3)));
    }
    for (LabelColumn col : {LabelColumn::first, LabelColumn::last}) {
        TempFile f("spa_t_roundtrip.csv");
        write_csv(data, f.str(), col);
        auto back = load_csv(f.str(), col);
        REQUIRE(back.size() == data.size());
        REQUIRE(back.dim() == data.dim());
        CHECK(back.labels == data.labels);
        CHECK((back.features - data.features).cwiseAbs().maxCoeff() == 0.0);
    }
}

} // TEST_SUITE

TEST_SUITE("load_usps") {

TEST_CASE("valid mini file") {
    TempFile f("spa_t_usps_ok.csv");
    std::string content;
    for (int digit = 0; digit <= 9; ++digit) {
        for (int rep = 0; rep < 2; ++rep) {
            std::string row = std::to_string(digit);
            for (int j = 0; j < 256; ++j) row += "," + std::to_string((j * 7 + digit) % 256);
            content += row + "\n";
        }
    }
    f.write(content);
    auto data = load_usps(f.str());
    CHECK(data.size() == 20);
    CHECK(data.dim() == 256);
    CHECK(data.distinct_labels().size() == 10);
}

TEST_CASE("pixel out of range rejected") {
    TempFile f("spa_t_usps_range.csv");
    std::string row = "3";
    for (int j = 0; j < 256; ++j) row += (j == 100 ? ",300" : ",5");
    f.write(row + "\n");
    CHECK_THROWS_WITH_AS(load_usps(f.str()), doctest::Contains("range"), ParseError);
}

TEST_CASE("wrong column count rejected") {
    TempFile f("spa_t_usps_cols.csv");
    f.write("3,1,2,3\n");
    CHECK_THROWS_AS(load_usps(f.str()), ParseError);
}

} // TEST_SUITE

TEST_SUITE("generate") {

TEST_CASE("noiseless disjoint curves lie exactly on their supports") {
    SynthSpec spec;
    spec.family = CurveFamily::disjoint_curves;
    spec.n_per_class = 40;
    spec.sigma = 0.0;
    spec.seed = 11;
    auto data = generate(spec);
    CHECK(data.size() == 80);
    CHECK(data.dim() == 2);
    for (Index i = 0; i < data.size(); ++i) {
        const double d = min_distance_to_curve(CurveFamily::disjoint_curves,
                                               data.labels[static_cast<std::size_t>(i)],
                                               data.features.row(i).transpose(), 2);
        CHECK(d < 1e-9);
    }
}

TEST_CASE("fixed seed reproduces bit-for-bit") {
    SynthSpec spec;
    spec.family = CurveFamily::funky_curves;
    spec.n_per_class = 50;
    spec.sigma = 0.05;
    spec.seed = 99;
    auto a = generate(spec);
    auto b = generate(spec);
    CHECK(a.labels == b.labels);
    CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("funky curves overlap: cross-class points come within 0.05") {
    SynthSpec spec;
    spec.family = CurveFamily::funky_curves;
    spec.n_per_class = 1000;
    spec.sigma = 0.02;
    spec.seed = 4;
    auto data = generate(spec);
    CHECK(data.size() == 3000);
    double closest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < data.size() && closest >= 0.05; ++i) {
        for (Index j = i + 1; j < data.size(); ++j) {
            if (data.labels[static_cast<std::size_t>(i)] ==
                data.labels[static_cast<std::size_t>(j)]) continue;
            closest = std::min(closest,
                               (data.features.row(i) - data.features.row(j)).norm());
            if (closest < 0.05) break;
        }
    }
    CHECK(closest < 0.05);
}

TEST_CASE("noise standard deviation matches sigma within 5 percent") {
    SynthSpec noiseless;
    noiseless.family = CurveFamily::disjoint_curves;
    noiseless.n_per_class = 6000;
    noiseless.sigma = 0.0;
    noiseless.seed = 31;
    SynthSpec noisy = noiseless;
    noisy.sigma = 0.25;
    auto z = generate(noiseless);
    auto x = generate(noisy);
    REQUIRE(z.size() == x.size());
    // identical parameter stream: x_i - z_i is exactly the noise
    Matrix diff = x.features - z.features;
    for (Index j = 0; j < diff.cols(); ++j) {
        const double mean = diff.col(j).mean();
        const double var = (diff.col(j).array() - mean).square().sum() /
                           static_cast<double>(diff.rows() - 1);
        CHECK(std::abs(std::sqrt(var) - 0.25) < 0.05 * 0.25);
    }
}

TEST_CASE("concentric spheres in higher dimension") {
    SynthSpec spec;
    spec.family = CurveFamily::concentric_spheres;
    spec.n_per_class = 30;
    spec.sigma = 0.0;
    spec.seed = 8;
    spec.ambient_dim = 5;
    spec.classes = 3;
    auto data = generate(spec);
    CHECK(data.size() == 90);
    CHECK(data.dim() == 5);
    for (Index i = 0; i < data.size(); ++i) {
        const int label = data.labels[static_cast<std::size_t>(i)];
        CHECK(data.features.row(i).norm() ==
              doctest::Approx(static_cast<double>(label)).epsilon(1e-12));
    }
}

TEST_CASE("disjoint curve separation is the documented constant") {
    CHECK(disjoint_curve_separation() == doctest::Approx(1.0));
    // spot check with a dense cross-scan
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2000; ++i) {
        const double t = 2.0 * 3.14159265358979323846 * i / 2000;
        const Vector a = curve_point(CurveFamily::disjoint_curves, 1, t, 2);
        for (int j = 0; j < 2000; ++j) {
            const double s = 2.0 * 3.14159265358979323846 * j / 2000;
            const Vector b = curve_point(CurveFamily::disjoint_curves, 2, s, 2);
            best = std::min(best, (a - b).norm());
        }
    }
    CHECK(best == doctest::Approx(1.0).epsilon(1e-4));
}

} // TEST_SUITE

TEST_SUITE("stratified_split") {

TEST_CASE("24 per class at one half gives 12 and 12") {
    SynthSpec spec;
    spec.family = CurveFamily::funky_curves;
    spec.n_per_class = 24;
    spec.seed = 5;
    auto data = generate(spec);
    auto split = stratified_split(data, 0.5, 42);
    for (int label : data.distinct_labels()) {
        CHECK(split.train.class_count(label) == 12);
        CHECK(split.test.class_count(label) == 12);
    }
}

TEST_CASE("ten percent of 1100-point classes is 110") {
    LabeledDataset data;
    data.features.resize(2200, 2);
    data.features.setRandom();
    data.labels.assign(2200, 1);
    for (int i = 1100; i < 2200; ++i) data.labels[static_cast<std::size_t>(i)] = 2;
    auto split = stratified_split(data, 0.1, 7);
    CHECK(split.train.class_count(1) == 110);
    CHECK(split.train.class_count(2) == 110);
    CHECK(split.test.size() == 1980);
}

TEST_CASE("same seed twice gives identical partitions") {
    SynthSpec spec;
    spec.family = CurveFamily::disjoint_curves;
    spec.n_per_class = 25;
    spec.sigma = 0.1;
    spec.seed = 3;
    auto data = generate(spec);
    auto a = stratified_split(data, 0.37, 1234);
    auto b = stratified_split(data, 0.37, 1234);
    CHECK((a.train.features - b.train.features).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.train.labels == b.train.labels);
    CHECK((a.test.features - b.test.features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partition is disjoint and exhaustive with remainder rounding") {
    LabeledDataset data;
    const int counts[3] = {11, 7, 5}; // odd sizes force remainders
    const int total = 23;
    data.features.resize(total, 3);
    int row = 0;
    for (int cls = 0; cls < 3; ++cls) {
        for (int i = 0; i < counts[cls]; ++i, ++row) {
            data.features.row(row) = Vector::Constant(3, row).transpose();
            data.labels.push_back(cls + 10);
        }
    }
    auto split = stratified_split(data, 0.4, 9);
    CHECK(split.train.size() + split.test.size() == total);
    // largest-remainder: total train = round(0.4 * 23) = 9
    CHECK(split.train.size() == 9);
    // per-class floors: 4.4 -> 4, 2.8 -> 2, 2.0 -> 2 (sum 8); leftover goes
    // to the largest remainder (.8 for the 7-point class)
    CHECK(split.train.class_count(10) == 4);
    CHECK(split.train.class_count(11) == 3);
    CHECK(split.train.class_count(12) == 2);
    // disjointness via the distinct feature rows
    std::set<double> train_ids, test_ids;
    for (Index i = 0; i < split.train.size(); ++i) train_ids.insert(split.train.features(i, 0));
    for (Index i = 0; i < split.test.size(); ++i) test_ids.insert(split.test.features(i, 0));
    CHECK(train_ids.size() == 9);
    CHECK(test_ids.size() == 14);
    for (double id : train_ids) CHECK(test_ids.count(id) == 0);
}

TEST_CASE("degenerate split rejected") {
    LabeledDataset data;
    data.features.resize(12, 2);
    data.features.setRandom();
    data.labels.assign(12, 1);
    for (int i = 0; i < 2; ++i) data.labels[static_cast<std::size_t>(i)] = 2;
    // fraction small enough that the 2-point class would get zero train rows
    CHECK_THROWS_AS(stratified_split(data, 0.05, 3), ValueError);
}

TEST_CASE("fraction bounds enforced") {
    LabeledDataset data;
    data.features.resize(4, 2);
    data.features.setRandom();
    data.labels = {1, 1, 2, 2};
    CHECK_THROWS_AS(stratified_split(data, 0.0, 1), ValueError);
    CHECK_THROWS_AS(stratified_split(data, 1.0, 1), ValueError);
}

} // TEST_SUITE
