#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "iforest/csv.hpp"
#include "iforest/datagen.hpp"

using namespace iforest;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() /
                ("iforest_csv_" + name + "_" + std::to_string(::getpid())))
                   .string();
    }
    ~TempFile() { std::remove(path.c_str()); }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

} // namespace

TEST_CASE("dataset csv round trip preserves every value") {
    const Dataset original = gen_blobs(40, 1.5, 6);
    TempFile file("roundtrip");
    save_dataset_csv(original, file.path);
    const Dataset loaded = load_dataset_csv(file.path);

    REQUIRE(loaded.size() == original.size());
    REQUIRE(loaded.dimension() == original.dimension());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded.label(i) == original.label(i));
        for (std::size_t j = 0; j < loaded.dimension(); ++j)
            CHECK(loaded.feature(i, j) == original.feature(i, j));
    }
}

TEST_CASE("csv reader tolerates comments, blanks, and CRLF") {
    TempFile file("lenient");
    file.write("# x0, x1, label\n\n1.5,2.5,1\r\n-3.0,0.25,0\n");
    const Dataset data = load_dataset_csv(file.path);
    REQUIRE(data.size() == 2);
    CHECK(data.feature(0, 0) == 1.5);
    CHECK(data.feature(1, 1) == 0.25);
    CHECK(data.label(0) == 1);
    CHECK(data.label(1) == 0);
}

TEST_CASE("csv reader rejects bad input") {
    TempFile file("bad");

    file.write("");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    file.write("1.0,abc,1\n");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    file.write("1.0,2.0,1\n1.0,2.0\n");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    file.write("1.0,2.0,7\n");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    file.write("1.0,nan,1\n");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    file.write("1\n");
    CHECK_THROWS_AS(load_dataset_csv(file.path), DataError);

    CHECK_THROWS_AS(load_dataset_csv("/nonexistent/nowhere.csv"), IoError);
}

TEST_CASE("feature tables read every column as a feature") {
    TempFile file("table");
    file.write("0.5,1.5,2.5\n3.5,4.5,5.5\n");
    const FeatureTable table = load_feature_table_csv(file.path);
    CHECK(table.rows == 2);
    CHECK(table.cols == 3);
    CHECK(table.values[4] == 4.5);
}

TEST_CASE("format_double survives the round trip") {
    for (double v : {0.1, -3.25, 1.0 / 3.0, 1e-300, 123456789.123456789}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}
