#include "oracles.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/fcidump.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace blissthc::tensor_core;

TEST(Fcidump, WriteLoadRoundTrip) {
  const auto H = oracle::random_hamiltonian(3, 4, 21);
  std::stringstream ss;
  write_fcidump(ss, H);
  const auto back = load_fcidump(ss);
  EXPECT_EQ(back.n_spatial(), 3u);
  EXPECT_EQ(back.eta(), 4);
  EXPECT_LT(frobenius_distance(back.g(), H.g()), 1e-14);
  EXPECT_LT((back.h() - H.h()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(back.core_energy(), H.core_energy(), 1e-15);
}

TEST(Fcidump, SingleLineHeader) {
  std::istringstream in("NORB=2 NELEC=2 MS2=0\n0.5 1 1 1 1\n-1.0 1 1 0 0\n-0.5 2 2 0 0\n0.25 0 0 0 0\n");
  const auto H = load_fcidump(in);
  EXPECT_EQ(H.g()(0, 0, 0, 0), 0.5);
  EXPECT_EQ(H.h()(1, 1), -0.5);
  EXPECT_EQ(H.core_energy(), 0.25);
}

TEST(Fcidump, ExpandsSymmetricImages) {
  std::istringstream in(" &FCI NORB=2,NELEC=2,\n /\n0.3 2 1 1 1\n");
  const auto H = load_fcidump(in);
  EXPECT_EQ(H.g()(0, 0, 0, 1), 0.3);
  EXPECT_EQ(H.g()(1, 0, 0, 0), 0.3);
}

TEST(Fcidump, BadRecordReportsLine) {
  std::istringstream in("&FCI NORB=2,NELEC=2,\n&END\n0.5 1 1 1 1\nnot a number 1 1 1\n");
  try {
    load_fcidump(in);
    FAIL() << "expected ParseError";
  } catch (const blissthc::ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.kind(), blissthc::ErrorKind::input);
  }
}

TEST(Fcidump, IndexOutOfRange) {
  std::istringstream in("&FCI NORB=2,NELEC=2,\n&END\n0.5 3 1 1 1\n");
  EXPECT_THROW(load_fcidump(in), blissthc::ParseError);
}

TEST(Fcidump, InconsistentDuplicateImages) {
  std::istringstream in("&FCI NORB=2,NELEC=2,\n&END\n0.5 2 1 1 1\n0.6 1 2 1 1\n");
  EXPECT_THROW(load_fcidump(in), blissthc::IntegrityError);
}

TEST(Fcidump, MissingFileIsIoError) {
  EXPECT_THROW(load_fcidump_file("/nonexistent/file.fcidump"), blissthc::IoError);
}
