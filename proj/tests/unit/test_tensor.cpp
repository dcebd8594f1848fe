#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "momtensor/error.hpp"
#include "momtensor/gaussian.hpp"
#include "momtensor/tensor.hpp"
#include "momtensor/tensor_io.hpp"
#include "momtensor/tensor_ops.hpp"
#include "oracles.hpp"

using namespace momtensor;

namespace {

double delta(std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; }

Tensor iota_tensor(Extents ext, double start = 1.0) {
  Tensor t(std::move(ext));
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = start + static_cast<double>(i);
  return t;
}

}  // namespace

TEST(Tensor, ScalarIsOrderZeroWithOneEntry) {
  Tensor s;
  EXPECT_EQ(s.order(), 0u);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(Tensor::scalar(2.5).data()[0], 2.5);
}

TEST(Tensor, RowMajorOffsets) {
  Tensor t = iota_tensor({2, 3, 4}, 0.0);
  EXPECT_EQ(t.offset(std::vector<std::size_t>{1, 2, 3}), 23u);
  EXPECT_EQ(t.at({0, 1, 2}), 6.0);
  EXPECT_EQ(t.unravel(17), (MultiIndex{1, 1, 1}));
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t.offset(t.unravel(i)), i);
}

TEST(Tensor, RejectsBadShapes) {
  EXPECT_THROW(Tensor({2, 0}), ShapeError);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0}), ShapeError);
  Tensor t({2, 2});
  EXPECT_THROW(t.at({2, 0}), ShapeError);
  EXPECT_THROW(t.at({0}), ShapeError);
}

TEST(Tensor, EntryGuard) {
  EXPECT_THROW(Tensor(Extents(9, 10)), GuardError);
  EXPECT_NO_THROW(checked_entry_count(Extents(8, 10)));
  EXPECT_EQ(entry_limit(), kDefaultMaxEntries);
}

TEST(Tensor, Arithmetic) {
  Tensor a = Tensor::matrix({{1, 2}, {3, 4}});
  Tensor b = Tensor::identity(2);
  EXPECT_EQ(a + b, Tensor::matrix({{2, 2}, {3, 5}}));
  EXPECT_EQ(a - b, Tensor::matrix({{0, 2}, {3, 3}}));
  EXPECT_EQ(2.0 * a, Tensor::matrix({{2, 4}, {6, 8}}));
  EXPECT_THROW(a += Tensor({3}), ShapeError);
  EXPECT_EQ(max_abs_diff(a, b), 4.0 - 1.0);
}

TEST(IndexCounter, VisitsAllIndicesInRowMajorOrder) {
  std::size_t n = 0;
  Tensor t({2, 3});
  for (IndexCounter idx({2, 3}); !idx.done(); idx.next()) EXPECT_EQ(t.offset(idx.index()), n++);
  EXPECT_EQ(n, 6u);
}

TEST(ModeSet, ValidatesAndComplements) {
  EXPECT_THROW(ModeSet({1, 1}), ShapeError);
  EXPECT_THROW(ModeSet({2, 1}), ShapeError);
  ModeSet s{1, 3};
  EXPECT_EQ(s.complement(5), (ModeSet{0, 2, 4}));
  EXPECT_THROW(s.check_within(3), ShapeError);
  EXPECT_TRUE(ModeSet{}.empty());
}

TEST(OuterProduct, IdentityPairsGiveDeltaPatterns) {
  const Tensor id = Tensor::identity(2);
  const Tensor adjacent = outer_product(id, id, ModeSet{0, 1});
  const Tensor crossed = outer_product(id, id, ModeSet{0, 2});
  for (IndexCounter idx(Extents(4, 2)); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    EXPECT_EQ(adjacent(i), delta(i[2], i[3]) * delta(i[0], i[1]));
    EXPECT_EQ(crossed(i), delta(i[1], i[3]) * delta(i[0], i[2]));
  }
}

TEST(OuterProduct, ComplementaryModesOnSameMatrixAgree) {
  const Tensor a = oracle::random_matrix(3, 3, 11);
  EXPECT_EQ(outer_product(a, a, ModeSet{0, 2}), outer_product(a, a, ModeSet{1, 3}));
  EXPECT_EQ(outer_product(a, a, ModeSet{0, 1}), outer_product(a, a, ModeSet{2, 3}));
}

TEST(OuterProduct, PlacesFactorsByModeSet) {
  const Tensor a = iota_tensor({2, 3});
  const Tensor b = iota_tensor({4}, 10.0);
  const Tensor c = outer_product(a, b, ModeSet{1});
  ASSERT_EQ(c.extents(), (Extents{2, 4, 3}));
  for (IndexCounter idx(c.extents()); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    EXPECT_EQ(c(i), a(i[0], i[2]) * b.at({i[1]}));
  }
}

TEST(OuterProduct, BoundaryCases) {
  const Tensor a = iota_tensor({2, 2});
  EXPECT_EQ(outer_product(a, Tensor::scalar(1.0), ModeSet{}), a);
  EXPECT_EQ(outer_product(Tensor::scalar(1.0), a, ModeSet{0, 1}), a);
  EXPECT_THROW(outer_product(a, a, ModeSet{0}), ShapeError);
  EXPECT_THROW(outer_product(a, a, ModeSet{0, 4}), ShapeError);
}

TEST(OuterProduct, ZeroInputGivesZero) {
  const Tensor z({2, 2});
  EXPECT_EQ(max_abs(outer_product(z, iota_tensor({3}))), 0.0);
}

TEST(OuterPower, Vectors) {
  EXPECT_EQ(outer_power(Tensor::vector({1, 2}), 2), Tensor::matrix({{1, 2}, {2, 4}}));
  EXPECT_EQ(outer_power(Tensor::vector({1, 1, 1}), 3), Tensor::filled(Extents(3, 3), 1.0));
  EXPECT_EQ(max_abs(outer_power(Tensor::vector({0, 0}), 4)), 0.0);
  EXPECT_THROW(outer_power(Tensor::vector({1}), 0), InvalidArgument);
  EXPECT_THROW(outer_power(Tensor({2, 2, 2}), 2), ShapeError);
}

TEST(OuterPower, MatricesPutRowModesFirst) {
  const Tensor x = iota_tensor({2, 3});
  const Tensor p = outer_power(x, 2);
  ASSERT_EQ(p.extents(), (Extents{2, 2, 3, 3}));
  for (IndexCounter idx(p.extents()); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    EXPECT_EQ(p(i), x(i[0], i[2]) * x(i[1], i[3]));
  }
}

TEST(EinsteinProduct, InnerProductOfVectors) {
  const Tensor x = Tensor::vector({1, 2, 3});
  const Tensor c = einstein_product(x, x, ModeSet{0}, ModeSet{0});
  EXPECT_EQ(c.order(), 0u);
  EXPECT_EQ(c.data()[0], 14.0);
}

TEST(EinsteinProduct, MatchesExplicitFourOrderSum) {
  const Tensor a = oracle::random_symmetric(2, 4, 3);
  const Tensor b = iota_tensor(Extents(4, 2));
  const Tensor c = einstein_product(a, b, ModeSet{2, 3}, ModeSet{0, 1});
  for (IndexCounter idx(Extents(4, 2)); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    double sum = 0.0;
    for (std::size_t j1 = 0; j1 < 2; ++j1) {
      for (std::size_t j2 = 0; j2 < 2; ++j2) sum += a.at({i[0], i[1], j1, j2}) * b.at({j1, j2, i[2], i[3]});
    }
    EXPECT_NEAR(c(i), sum, 1e-14);
  }
}

TEST(EinsteinProduct, FreeModesKeepOrder) {
  const Tensor a = iota_tensor({2, 3, 4});
  const Tensor b = iota_tensor({5, 3});
  const Tensor c = einstein_product(a, b, ModeSet{1}, ModeSet{1});
  ASSERT_EQ(c.extents(), (Extents{2, 4, 5}));
  for (IndexCounter idx(c.extents()); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    double sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) sum += a.at({i[0], j, i[1]}) * b.at({i[2], j});
    EXPECT_EQ(c(i), sum);
  }
}

TEST(EinsteinProduct, RejectsEmptyOrMismatchedContraction) {
  const Tensor a = iota_tensor({2, 3});
  EXPECT_THROW(einstein_product(a, a, ModeSet{}, ModeSet{}), InvalidArgument);
  EXPECT_THROW(einstein_product(a, a, ModeSet{0}, ModeSet{1}), ShapeError);
  EXPECT_THROW(einstein_product(a, a, ModeSet{0}, ModeSet{0, 1}), ShapeError);
}

TEST(KModeRight, FollowsEntrywiseDefinition) {
  const Tensor a = iota_tensor({2, 3});
  EXPECT_EQ(k_mode_right(a, Tensor::identity(3), 1), a);

  const Tensor ones = Tensor::filled({2, 2, 2}, 1.0);
  EXPECT_EQ(k_mode_right(ones, Tensor::matrix({{2, 0}, {0, 2}}), 2), Tensor::filled({2, 2, 2}, 2.0));

  Tensor e111({2, 2, 2});
  e111.at({0, 0, 0}) = 1.0;
  Tensor e211({2, 2, 2});
  e211.at({1, 0, 0}) = 1.0;
  EXPECT_EQ(k_mode_right(e111, Tensor::matrix({{0, 1}, {1, 0}}), 0), e211);
}

TEST(KModeRight, OnMatricesIsTransposedProduct) {
  const Tensor a = oracle::random_matrix(3, 2, 5);
  const Tensor b = oracle::random_matrix(3, 4, 6);
  EXPECT_LT(max_abs_diff(k_mode_right(a, b, 0), matmul(transpose(b), a)), 1e-15);
  const Tensor c = oracle::random_matrix(2, 4, 7);
  EXPECT_LT(max_abs_diff(k_mode_right(a, c, 1), matmul(a, c)), 1e-15);
  EXPECT_THROW(k_mode_right(a, c, 0), ShapeError);
  EXPECT_THROW(k_mode_right(a, c, 2), ShapeError);
}

TEST(KModeLeft, MatchesLoopOracleAndMatrixProduct) {
  const Tensor a = iota_tensor({2, 3, 2});
  const Tensor b = oracle::random_matrix(4, 3, 9);
  EXPECT_LT(max_abs_diff(k_mode_left(b, a, 1), oracle::left_mode_product(b, a, 1)), 1e-14);

  const Tensor m = Tensor::matrix({{1, 2}, {3, 4}});
  const Tensor left = Tensor::matrix({{0, 1}, {2, 3}});
  EXPECT_EQ(k_mode_left(left, m, 0), matmul(left, m));
  EXPECT_EQ(k_mode_left(Tensor::identity(3), a, 1), a);
  EXPECT_EQ(k_mode_left(2.0 * Tensor::identity(2), a, 0), 2.0 * a);
}

TEST(ApplyAllModes, ScalesAndTransformsPowers) {
  const Tensor a = oracle::random_symmetric(3, 3, 1);
  EXPECT_EQ(apply_all_modes(Tensor::identity(3), a), a);
  EXPECT_EQ(apply_all_modes(2.0 * Tensor::identity(3), a), 8.0 * a);

  const Tensor x = Tensor::vector({0.5, -1.0, 2.0});
  const Tensor b = oracle::random_matrix(3, 3, 2);
  const Tensor bx = contract_to_vector(b, x);
  const Tensor lhs = apply_all_modes(b, outer_power(x, 4));
  const Tensor rhs = outer_power(bx, 4);
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12 * max_abs(rhs));
}

TEST(ApplyAllModes, EqualsComposedLeftProducts) {
  const Tensor a = oracle::random_symmetric(2, 3, 4);
  const Tensor b = oracle::random_matrix(3, 2, 8);
  Tensor composed = a;
  for (std::size_t mode = 0; mode < 3; ++mode) composed = oracle::left_mode_product(b, composed, mode);
  EXPECT_LT(max_abs_diff(apply_all_modes(b, a), composed), 1e-14);
  EXPECT_THROW(apply_all_modes(b, Tensor({2, 3})), ShapeError);
}

TEST(Tensor4, IdentityIsTwoSidedUnit) {
  const Tensor id = identity_tensor4(3);
  const Tensor a = iota_tensor(Extents(4, 3));
  EXPECT_EQ(tensor4_product(a, id), a);
  EXPECT_EQ(tensor4_product(id, a), a);
  EXPECT_EQ(max_abs(tensor4_product(Tensor(Extents(4, 3)), a)), 0.0);
}

TEST(Tensor4, IdentityStructure) {
  EXPECT_EQ(identity_tensor4(1).data()[0], 1.0);
  const Tensor id = identity_tensor4(2);
  EXPECT_EQ(id, outer_product(Tensor::identity(2), Tensor::identity(2), ModeSet{1, 3}));
  double ones = 0.0;
  for (double v : id.data()) ones += v;
  EXPECT_EQ(ones, 4.0);
  EXPECT_EQ(id.at({0, 1, 0, 1}), 1.0);
  EXPECT_FALSE(is_symmetric(id, 0.0));
}

TEST(Tensor4, Associative) {
  const Tensor a = oracle::random_symmetric(3, 4, 21) + iota_tensor(Extents(4, 3), -40.0) * 0.01;
  const Tensor b = oracle::random_symmetric(3, 4, 22);
  const Tensor c = oracle::random_symmetric(3, 4, 23);
  EXPECT_LT(max_abs_diff(tensor4_product(tensor4_product(a, b), c), tensor4_product(a, tensor4_product(b, c))),
            1e-12);
  EXPECT_THROW(tensor4_product(a, Tensor(Extents(4, 2))), ShapeError);
}

TEST(Polynomial, EvaluatesHomogeneousForms) {
  const Tensor x = Tensor::vector({1.5, -2.0});
  EXPECT_EQ(poly_eval(Tensor::identity(2), x), 1.5 * 1.5 + 4.0);
  EXPECT_EQ(poly_eval(identity_tensor4(2), Tensor::vector({1, 1})), 4.0);

  const Tensor s = Tensor::matrix({{2, 1}, {1, 3}});
  EXPECT_EQ(contract_to_vector(s, x), Tensor::vector({2 * 1.5 - 2.0, 1.5 - 6.0}));

  const Tensor a = oracle::random_symmetric(3, 4, 5);
  const Tensor y = Tensor::vector({0.3, -0.7, 1.1});
  const Tensor g = contract_to_vector(a, y);
  const double inner = g.data()[0] * 0.3 - g.data()[1] * 0.7 + g.data()[2] * 1.1;
  EXPECT_NEAR(poly_eval(a, y), inner, 1e-14);
  EXPECT_THROW(poly_eval(a, Tensor::vector({1, 2})), ShapeError);
}

TEST(Symmetry, DetectsAndRepairs) {
  EXPECT_TRUE(is_symmetric(outer_power(Tensor::vector({1, 2, 3}), 3), 0.0));
  EXPECT_TRUE(is_symmetric(snd_moment(3, 4), 0.0));
  const Tensor a = iota_tensor({3, 3, 3});
  EXPECT_FALSE(is_symmetric(a, 1e-6));
  const Tensor s = symmetrize(a);
  EXPECT_TRUE(is_symmetric(s, 1e-12));
  EXPECT_NEAR(s.at({0, 1, 2}), (a.at({0, 1, 2}) + a.at({0, 2, 1}) + a.at({1, 0, 2}) + a.at({1, 2, 0}) +
                                a.at({2, 0, 1}) + a.at({2, 1, 0})) / 6.0, 1e-12);
  EXPECT_THROW(is_symmetric(Tensor({2, 3}), 0.0), ShapeError);
}

TEST(PermuteModes, MovesIndices) {
  const Tensor a = iota_tensor({2, 3, 4});
  const std::vector<std::size_t> perm{2, 0, 1};
  const Tensor p = permute_modes(a, perm);
  ASSERT_EQ(p.extents(), (Extents{4, 2, 3}));
  for (IndexCounter idx(p.extents()); !idx.done(); idx.next()) {
    const auto& i = idx.index();
    EXPECT_EQ(p(i), a.at({i[1], i[2], i[0]}));
  }
}

TEST(TensorIo, JsonRoundTripIsBitExact) {
  Tensor t({2, 3});
  const std::vector<double> values{0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 2.0};
  std::copy(values.begin(), values.end(), t.data().begin());
  const std::string text = tensor_to_json(t);
  EXPECT_NE(text.find("\"layout\":\"row-major\""), std::string::npos);
  const Tensor back = tensor_from_json(text);
  ASSERT_EQ(back.extents(), t.extents());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.data()[i]), std::bit_cast<std::uint64_t>(t.data()[i]));
  }
  EXPECT_EQ(tensor_from_json(tensor_to_json(Tensor::scalar(3.0))), Tensor::scalar(3.0));
}

TEST(TensorIo, JsonRejectsMalformedInput) {
  EXPECT_THROW(tensor_from_json("{"), FormatError);
  EXPECT_THROW(tensor_from_json(R"({"order":1,"extents":[2],"layout":"row-major","data":[1]})"), FormatError);
  EXPECT_THROW(tensor_from_json(R"({"order":2,"extents":[2],"layout":"row-major","data":[1,2]})"), FormatError);
  EXPECT_THROW(tensor_from_json(R"({"order":1,"extents":[2],"layout":"col-major","data":[1,2]})"), FormatError);
  Tensor bad({1});
  bad.data()[0] = std::nan("");
  EXPECT_THROW(tensor_to_json(bad), FormatError);
}

TEST(TensorIo, BinaryRoundTripAndLayout) {
  const Tensor t = iota_tensor({2, 2}, 0.5);
  const std::string bytes = tensor_to_binary(t);
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 2 * 8 + 4 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "TNSR");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), kTensorBinaryVersion);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  EXPECT_EQ(tensor_from_binary(bytes), t);
  EXPECT_THROW(tensor_from_binary(bytes.substr(0, bytes.size() - 1)), FormatError);
  EXPECT_THROW(tensor_from_binary(bytes + "x"), FormatError);
  EXPECT_THROW(tensor_from_binary("TNSX" + bytes.substr(4)), FormatError);
}

TEST(TensorIo, AtomicWriteReplacesFile) {
  const auto path = std::filesystem::temp_directory_path() / "momtensor_atomic_test.json";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
  EXPECT_THROW(read_file(path), FormatError);
}
