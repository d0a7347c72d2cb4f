#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fhnvs/error.hpp"
#include "fhnvs/field_io.hpp"
#include "fhnvs/random.hpp"

using namespace fhnvs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fhnvs_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST(FieldIo, CsvRoundTripIsBitwise) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Grid g(dim, 1.7, 5);
    Rng rng(static_cast<std::uint64_t>(dim));
    const Field u = random_nodal_field(g, rng, -1e3, 1e3);
    const fs::path p = scratch("rt" + std::to_string(dim) + ".csv");
    save_csv(u, p);
    const Field v = load_csv(g, p);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(u[i], v[i]);
  }
}

TEST(FieldIo, RejectsWrongHeader) {
  const Grid g(1, 1.0, 3);
  const fs::path p = scratch("hdr.csv");
  write_text(p, "x,value\n-0.5,1\n0,1\n0.5,1\n");
  EXPECT_THROW(load_csv(g, p), FormatError);
}

TEST(FieldIo, RejectsWrongRowCount) {
  const Grid g(1, 1.0, 3);
  const fs::path p = scratch("rows.csv");
  write_text(p, "x1,value\n-0.5,1\n0,1\n");
  EXPECT_THROW(load_csv(g, p), FormatError);
}

TEST(FieldIo, RejectsNonFiniteAndGarbage) {
  const Grid g(1, 1.0, 3);
  const fs::path p = scratch("nan.csv");
  write_text(p, "x1,value\n-0.5,1\n0,nan\n0.5,1\n");
  EXPECT_THROW(load_csv(g, p), FormatError);
  write_text(p, "x1,value\n-0.5,1\n0,abc\n0.5,1\n");
  EXPECT_THROW(load_csv(g, p), FormatError);
}

TEST(FieldIo, RejectsMismatchedCoordinates) {
  const Grid g(1, 1.0, 3);
  const fs::path p = scratch("coord.csv");
  write_text(p, "x1,value\n-0.5,1\n0.1,1\n0.5,1\n");
  EXPECT_THROW(load_csv(g, p), FormatError);
}

TEST(FieldIo, MissingFile) {
  const Grid g(1, 1.0, 3);
  EXPECT_THROW(load_csv(g, scratch("does_not_exist.csv")), FormatError);
}

TEST(FieldIo, VtkHasHeaderAndAllPoints) {
  const Grid g(2, 1.0, 4);
  const fs::path p = scratch("f.vtk");
  save_vtk(Field(g, 2.5), p, "u");
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  EXPECT_NE(first.find("vtk DataFile"), std::string::npos);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(all.find("POINT_DATA 16"), std::string::npos);
  EXPECT_NE(all.find("SCALARS u"), std::string::npos);
}
