#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sqg/container.hpp"
#include "sqg/io.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("sqg_io_" + name); }

}  // namespace

TEST(Io, GitBlobHashMatchesGit) {
    // `git hash-object` of an empty file and of "hello\n"
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
    const fs::path p = tmp("hash.txt");
    std::ofstream(p) << "hello\n";
    EXPECT_EQ(git_blob_hash_file(p.string()), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Io, DoublesRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Io, CsvCloseFlushesBeforeHashing) {
    const fs::path p = tmp("flush.csv");
    CsvWriter w(p.string(), {"a"});
    w << 1;
    w.end_row();
    w.close();
    EXPECT_EQ(git_blob_hash_file(p.string()), git_blob_hash("a\n1\n"));
}

TEST(Io, CsvRowWidthChecked) {
    const fs::path p = tmp("t.csv");
    {
        CsvWriter w(p.string(), {"a", "b"});
        w << 1 << 0.5;
        w.end_row();
        w << 2;
        EXPECT_ANY_THROW(w.end_row());
    }
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "a,b");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0.5");
}

TEST(Container, SpectrumRoundTrip) {
    const Grid g(64);
    Spectrum s(g);
    for (std::size_t i = 0; i < s.coeff.size(); ++i) s.coeff[i] = std::sin(double(i));
    const fs::path p = tmp("s.sqgf");
    write_container(p.string(), pack_spectrum(s, MultiplierSpec{}));
    const Spectrum back = unpack_spectrum(read_container(p.string()));
    EXPECT_EQ(back.grid.resolution(), 64);
    EXPECT_EQ(back.coeff, s.coeff);
}

TEST(Container, RetainedBlockDropsOnlyTruncatedModes) {
    const Grid g(64);
    Spectrum s(g);
    for (int m1 = 1; m1 <= g.max_retained(); ++m1)
        for (int m2 = 1; m2 <= g.max_retained(); ++m2) s(m1, m2) = m1 - 0.5 * m2;
    const Container c = pack_spectrum(s, MultiplierSpec{}, g.max_retained());
    EXPECT_LT(c.payload.size(), s.coeff.size());
    EXPECT_EQ(unpack_spectrum(c).coeff, s.coeff);
}

TEST(Container, FieldRoundTripAndBadMagic) {
    ScalarField f(Grid(32));
    f(3, 4) = 1.25;
    f.axis_margin = 0.01;
    const fs::path p = tmp("f.sqgf");
    write_container(p.string(), pack_field(f));
    const ScalarField back = unpack_field(read_container(p.string()));
    EXPECT_EQ(back.values, f.values);
    EXPECT_EQ(back.axis_margin, 0.01);

    const fs::path bad = tmp("bad.sqgf");
    std::ofstream(bad) << "NOPE and more bytes";
    EXPECT_ANY_THROW(read_container(bad.string()));
}
