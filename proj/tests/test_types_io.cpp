#include <fstream>
#include <random>

#include <doctest.h>

#include "tmi/io.hpp"
#include "tmi/types.hpp"
#include "test_util.hpp"

using namespace tmi;

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("csv features load with rows in file order") {
    test::TempDir dir("csv");
    write_text(dir.file("f.csv"), "1.0,2.0\n3.0,4.0\n5.0,6.0\n");
    const FeatureMatrix m = load_features(dir.file("f.csv"), FileFormat::csv);
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 2);
    CHECK(m.data()(0, 0) == 1.0);
    CHECK(m.data()(1, 1) == 4.0);
    CHECK(m.data()(2, 0) == 5.0);
}

TEST_CASE("csv with nan fails validation naming the coordinates") {
    test::TempDir dir("nan");
    write_text(dir.file("f.csv"), "1.0,2.0\n3.0,nan\n");
    try {
        load_features(dir.file("f.csv"), FileFormat::csv);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string message = e.what();
        CHECK(message.find("row 1") != std::string::npos);
        CHECK(message.find("column 1") != std::string::npos);
    }
}

TEST_CASE("ragged csv row is a parse error naming the row") {
    test::TempDir dir("ragged");
    write_text(dir.file("f.csv"), "1.0,2.0\n3.0\n");
    try {
        load_features(dir.file("f.csv"), FileFormat::csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
}

TEST_CASE("garbage csv token is a parse error") {
    test::TempDir dir("garbage");
    write_text(dir.file("f.csv"), "1.0,abc\n");
    CHECK_THROWS_AS(load_features(dir.file("f.csv"), FileFormat::csv), ParseError);
}

TEST_CASE("binary round trip is bit exact") {
    test::TempDir dir("bin");
    Matrix original = test::uniform_matrix(42, 100, 8, -5.0, 5.0);
    original(0, 0) = 0.1 + 0.2;  // a value without a short decimal form
    const FeatureMatrix written(original);
    save_features(written, dir.file("f.bin"), FileFormat::binary);
    const FeatureMatrix read = load_features(dir.file("f.bin"), FileFormat::binary);
    REQUIRE(read.rows() == 100);
    REQUIRE(read.cols() == 8);
    CHECK(read.data() == original);
}

TEST_CASE("csv round trip is bit exact") {
    test::TempDir dir("csvrt");
    const Matrix original = test::gaussian_matrix(7, 40, 3);
    save_features(FeatureMatrix(original), dir.file("f.csv"), FileFormat::csv);
    const FeatureMatrix read = load_features(dir.file("f.csv"), FileFormat::csv);
    CHECK(read.data() == original);
}

TEST_CASE("binary loader rejects corrupted headers") {
    test::TempDir dir("badbin");
    write_text(dir.file("f.bin"), "NOPE");
    CHECK_THROWS_AS(load_features(dir.file("f.bin"), FileFormat::binary), ParseError);
}

TEST_CASE("labels load and infer the class count") {
    test::TempDir dir("labels");
    write_text(dir.file("l.txt"), "0\n1\n0\n");
    const LabelVector labels = load_labels(dir.file("l.txt"));
    REQUIRE(labels.size() == 3);
    CHECK(labels.num_classes() == 2);
    CHECK(labels[0] == 0);
    CHECK(labels[1] == 1);
}

TEST_CASE("label outside a given class count fails") {
    test::TempDir dir("labelbound");
    write_text(dir.file("l.txt"), "2\n");
    CHECK_THROWS_AS(load_labels(dir.file("l.txt"), 2), ValidationError);
    CHECK_NOTHROW(load_labels(dir.file("l.txt"), 3));
}

TEST_CASE("negative labels fail") {
    test::TempDir dir("labelneg");
    write_text(dir.file("l.txt"), "0\n-1\n");
    CHECK_THROWS_AS(load_labels(dir.file("l.txt")), ValidationError);
}

TEST_CASE("1000 labels round trip with inferred class count") {
    test::TempDir dir("labelrt");
    const std::vector<std::int32_t> values = test::random_labels(3, 1000, 10);
    const bool has_nine =
        std::find(values.begin(), values.end(), 9) != values.end();
    REQUIRE(has_nine);  // seed chosen so the top class occurs
    save_labels(LabelVector(values, 10), dir.file("l.txt"));
    const LabelVector read = load_labels(dir.file("l.txt"));
    REQUIRE(read.size() == 1000);
    CHECK(read.num_classes() == 10);
    CHECK(read.values() == values);
}

TEST_CASE("accuracies parse, validate range and uniqueness") {
    test::TempDir dir("acc");
    write_text(dir.file("a.csv"), "resnet,0.91\nvit,0.87\n");
    const AccuracyVector acc = load_accuracies(dir.file("a.csv"));
    REQUIRE(acc.size() == 2);
    CHECK(*acc.find("resnet") == 0.91);
    CHECK(!acc.find("absent").has_value());

    write_text(dir.file("dup.csv"), "m,0.5\nm,0.6\n");
    CHECK_THROWS_AS(load_accuracies(dir.file("dup.csv")), ValidationError);
    write_text(dir.file("range.csv"), "m,1.5\n");
    CHECK_THROWS_AS(load_accuracies(dir.file("range.csv")), ValidationError);
}

TEST_CASE("prediction matrix must be row stochastic") {
    Matrix good(2, 3);
    good << 0.2, 0.3, 0.5, 1.0, 0.0, 0.0;
    CHECK_NOTHROW(SourcePredictionMatrix{good});

    Matrix bad_sum(1, 2);
    bad_sum << 0.6, 0.6;
    CHECK_THROWS_AS(SourcePredictionMatrix{bad_sum}, ValidationError);

    Matrix negative(1, 2);
    negative << -0.5, 1.5;
    CHECK_THROWS_AS(SourcePredictionMatrix{negative}, ValidationError);
}

TEST_CASE("split_by_class partitions rows in order") {
    Matrix features(3, 1);
    features << 1.0, 2.0, 3.0;
    const LabelVector labels({0, 1, 0}, 2);
    const std::vector<Matrix> blocks = split_by_class(FeatureMatrix(features), labels);
    REQUIRE(blocks.size() == 2);
    REQUIRE(blocks[0].rows() == 2);
    CHECK(blocks[0](0, 0) == 1.0);
    CHECK(blocks[0](1, 0) == 3.0);
    REQUIRE(blocks[1].rows() == 1);
    CHECK(blocks[1](0, 0) == 2.0);
}

TEST_CASE("split_by_class with one class returns the input") {
    const Matrix features = test::uniform_matrix(5, 6, 2);
    const LabelVector labels(std::vector<std::int32_t>(6, 0), 1);
    const std::vector<Matrix> blocks = split_by_class(FeatureMatrix(features), labels);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == features);
}

TEST_CASE("split_by_class matches a brute-force filter and empty classes stay empty") {
    const Matrix features = test::uniform_matrix(17, 50, 3);
    std::vector<std::int32_t> raw = test::random_labels(19, 50, 4);
    const LabelVector labels(raw, 6);  // classes 4 and 5 never occur
    const std::vector<Matrix> blocks = split_by_class(FeatureMatrix(features), labels);
    REQUIRE(blocks.size() == 6);
    CHECK(blocks[4].rows() == 0);
    CHECK(blocks[5].rows() == 0);

    Eigen::Index total = 0;
    for (std::int32_t c = 0; c < 6; ++c) {
        Eigen::Index next = 0;
        for (Eigen::Index i = 0; i < features.rows(); ++i) {
            if (raw[static_cast<std::size_t>(i)] != c) continue;
            REQUIRE(next < blocks[static_cast<std::size_t>(c)].rows());
            CHECK(blocks[static_cast<std::size_t>(c)].row(next) == features.row(i));
            ++next;
        }
        CHECK(next == blocks[static_cast<std::size_t>(c)].rows());
        total += next;
    }
    CHECK(total == features.rows());
}

TEST_CASE("split_by_class rejects mismatched lengths") {
    const Matrix features = test::uniform_matrix(23, 4, 2);
    const LabelVector labels({0, 1}, 2);
    CHECK_THROWS_AS(split_by_class(FeatureMatrix(features), labels), ValidationError);
}

TEST_CASE("feature matrix invariants") {
    CHECK_THROWS_AS(FeatureMatrix{Matrix(0, 3)}, ValidationError);
    Matrix inf_matrix(1, 1);
    inf_matrix << std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(FeatureMatrix{inf_matrix}, ValidationError);
}
