#include <gtest/gtest.h>

#include <cmath>

#include "entroof/state_io.hpp"
#include "test_support.hpp"

using namespace entroof;

namespace {

std::string invariant_of(const std::string& text) {
  try {
    parse_state(text);
  } catch (const ValidationError& e) {
    return e.invariant();
  }
  return "";
}

}  // namespace

TEST(StateIo, BellRoundTripIsIdentical) {
  const std::string text = format_state(fixtures::bell_phi_plus());
  EXPECT_EQ(text, "dims: 2 2\nkind: pure\n0.7071067811865476+0j 0+0j 0+0j 0.7071067811865476+0j\n");
  const AnyState back = parse_state(text);
  EXPECT_EQ(format_state(back), text);

  const auto rho = DensityMatrix::from_pure(fixtures::bell_phi_plus());
  const std::string dtext = format_state(rho);
  EXPECT_EQ(format_state(parse_state(dtext)), dtext);
}

TEST(StateIo, RandomStatesRoundTripBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = fixtures::random_state({2, 3}, 1 + seed % 6, seed);
    const std::string text = format_state(rho);
    const auto back = std::get<DensityMatrix>(parse_state(text));
    EXPECT_EQ(back.matrix(), rho.matrix());
    EXPECT_EQ(format_state(back), text);
  }
}

TEST(StateIo, EntryFormat) {
  EXPECT_EQ(format_entry({0.5, -0.25}), "0.5-0.25j");
  EXPECT_EQ(format_entry({-1e-20, 3.0}), "-1e-20+3j");
  EXPECT_EQ(parse_entry("1e-05+2e+03j"), cplx(1e-5, 2e3));
  EXPECT_EQ(parse_entry("-0.5-1j"), cplx(-0.5, -1));
  EXPECT_THROW(parse_entry("0.5"), ValidationError);
  EXPECT_THROW(parse_entry("0,5+0j"), ValidationError);
  EXPECT_THROW(parse_entry("1+-2j"), ValidationError);
}

TEST(StateIo, RejectsTraceViolation) {
  EXPECT_EQ(invariant_of("dims: 2\nkind: density\n0.4+0j 0+0j\n0+0j 0.4+0j\n"), "trace");
}

TEST(StateIo, RejectsAmplitudeCountMismatch) {
  std::string nine = "dims: 2 2\nkind: pure\n";
  for (int i = 0; i < 9; ++i) nine += (i ? " " : "") + std::string(i == 0 ? "1+0j" : "0+0j");
  nine += "\n";
  EXPECT_EQ(invariant_of(nine), "dimension");
  EXPECT_EQ(invariant_of("dims: 2\nkind: density\n1+0j 0+0j\n"), "dimension");
}

TEST(StateIo, RejectsMalformedHeaders) {
  EXPECT_EQ(invariant_of("dim: 2\nkind: pure\n1+0j 0+0j\n"), "format");
  EXPECT_EQ(invariant_of("dims: 2\nkind: mixed\n1+0j 0+0j\n"), "format");
  EXPECT_EQ(invariant_of("dims: x\nkind: pure\n1+0j 0+0j\n"), "format");
  EXPECT_EQ(invariant_of("dims: 2\nkind: pure\n1+0j nan+0j\n"), "format");
  EXPECT_EQ(invariant_of("dims: 2\nkind: pure\n1+0j 1+0j\n"), "normalization");
}

TEST(StateIo, SkipsCommentsAndBlankLines) {
  const auto s = parse_state("# a comment\ndims: 2\n\nkind: pure\n0+0j 1+0j\n");
  EXPECT_TRUE(std::holds_alternative<PureState>(s));
}
