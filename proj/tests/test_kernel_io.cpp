#include <gtest/gtest.h>

#include <random>
#include <string>

#include "chaosclt/errors.hpp"
#include "chaosclt/kernel_io.hpp"
#include "oracles.hpp"

using namespace chaosclt;

namespace {

// Runs the parser and returns the error, failing the test if none is thrown.
ParseError parse_failure(const std::string& text) {
  try {
    parse_kernel(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(KernelIo, DenseRoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  const DenseKernel f(3, 3, oracle::random_vector(rng, 27));
  const Kernel back = parse_kernel(serialize_kernel(f));
  const auto& d = std::get<DenseKernel>(back);
  EXPECT_EQ(d.order(), 3);
  EXPECT_EQ(d.dim(), 3u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.values()[i], f.values()[i]);
}

TEST(KernelIo, RankOneRoundTripKeepsFlagAndTerms) {
  const RankOneSumKernel k(4, 2, {{0.1, {1.0 / 3.0, -2e-300}}, {-7.5, {1e300, 0.7}}}, true);
  const Kernel back = parse_kernel(serialize_kernel(k));
  const auto& r = std::get<RankOneSumKernel>(back);
  EXPECT_EQ(r.order(), 4);
  EXPECT_TRUE(r.stationary());
  ASSERT_EQ(r.term_count(), 2u);
  EXPECT_EQ(r.coefficients(), k.coefficients());
  EXPECT_EQ(r.vectors(), k.vectors());
}

TEST(KernelIo, ShortestNumberForm) {
  const std::string text = serialize_kernel(DenseKernel(1, 2, {0.7, 0.1}));
  EXPECT_NE(text.find("0.7 0.1\n"), std::string::npos) << text;
}

TEST(KernelIo, AcceptsCommentsAndFreeLayout) {
  const Kernel k = parse_kernel(
      "# identity\nchaosclt-kernel 1\norder 2 dim 2\nrepresentation dense\n"
      "values 1 0   # first row\n 0 1\nend\n");
  EXPECT_DOUBLE_EQ(norm(k), std::sqrt(2.0));
  const Kernel r = parse_kernel(
      "chaosclt-kernel 1\norder 2\ndim 2\nrepresentation rank-one\nterms 1\nterm 2 0.6 0.8\nend\n");
  EXPECT_FALSE(std::get<RankOneSumKernel>(r).stationary());
  EXPECT_NEAR(norm(r), 2.0, 1e-15);
}

TEST(KernelIo, ErrorsCarryLineAndColumn) {
  {
    const ParseError e = parse_failure("chaosclt-kernel 1\norder 1\ndim 2\nrepresentation dense\nvalues\n1 x\nend\n");
    EXPECT_EQ(e.line(), 6u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 6, column 3"), std::string::npos);
  }
  {
    const ParseError e = parse_failure("chaosclt-kernel 2\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 17u);
  }
  {
    const ParseError e = parse_failure("chaosclt-kernel 1\norder 1\ndim 2\nrepresentation sparse\n");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 16u);
  }
  {
    const ParseError e = parse_failure("chaosclt-kernel 1\norder 1\ndim 2\nrepresentation dense\nvalues\n1\n");
    EXPECT_NE(e.message().find("end of input"), std::string::npos);
  }
  {
    const ParseError e = parse_failure(
        "chaosclt-kernel 1\norder 2\ndim 2\nrepresentation rank-one\nstationary 2\n");
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 12u);
  }
  {
    const ParseError e = parse_failure("chaosclt-kernel 1\norder 1\ndim 1\nrepresentation dense\nvalues\nnan\nend\n");
    EXPECT_EQ(e.line(), 6u);
  }
  {
    const ParseError e = parse_failure("chaosclt-kernel 1\norder 1\ndim 1\nrepresentation dense\nvalues\n1\nend extra\n");
    EXPECT_EQ(e.line(), 7u);
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(KernelIo, GuardAndSourceName) {
  EXPECT_THROW(parse_kernel("chaosclt-kernel 1\norder 8\ndim 10\nrepresentation dense\nvalues\n"), ParseError);
  const ParseError e = parse_failure("bogus").with_source("k.txt");
  EXPECT_EQ(std::string(e.what()).rfind("k.txt: line 1, column 1", 0), 0u) << e.what();
}
