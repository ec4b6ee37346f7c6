#include <doctest.h>

#include <random>
#include <set>

#include "hoseeg/error.hpp"
#include "hoseeg/hos.hpp"
#include "support.hpp"

using namespace hoseeg;

namespace {

SegmentPlan rect_plan(Eigen::Index nfft) {
  SegmentPlan p;
  p.nfft = nfft;
  p.overlap = 0.0;
  p.window = Taper::rectangular;
  p.remove_mean = false;
  return p;
}

}  // namespace

TEST_CASE("periodic hann taper") {
  const auto w = taper<double>(Taper::hann, 8);
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(4) == doctest::Approx(1.0));
  CHECK(w(2) == doctest::Approx(0.5));
  CHECK(w(6) == doctest::Approx(0.5));
  // periodic: w(k) == w(n - k)
  for (int k = 1; k < 8; ++k) CHECK(w(k) == doctest::Approx(w(8 - k)));
  CHECK(taper<double>(Taper::rectangular, 5).sum() == 5.0);
}

TEST_CASE("segment counts and hop") {
  SegmentPlan p;
  CHECK(p.hop() == 128);
  CHECK(segment_count(1500, p) == 10);
  CHECK(segment_count(256, p) == 1);
  CHECK(segment_count(255, p) == 0);
  p.overlap = 0.0;
  CHECK(segment_count(16384, p) == 64);
  p.zero_pad = true;
  CHECK(segment_count(250, p) == 1);
}

TEST_CASE("segment rejects bad plans and short signals") {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(300);
  SegmentPlan p;
  p.nfft = 100;
  CHECK_THROWS_AS(segment(x, p, 250.0), ConfigError);
  p.nfft = 256;
  p.overlap = 1.0;
  CHECK_THROWS_AS(segment(x, p, 250.0), ConfigError);
  p.overlap = 0.5;
  CHECK_THROWS_AS(segment(x.head(100), p, 250.0), DataError);
  CHECK_THROWS_AS(segment(x, p, 0.0), ConfigError);
}

TEST_CASE("segment spectra match a direct DFT of the tapered demeaned slice") {
  std::mt19937_64 rng(3);
  const Eigen::VectorXd x = testing::gaussian(96, rng);
  SegmentPlan p;
  p.nfft = 32;
  p.overlap = 0.5;
  const auto s = segment(x, p, 100.0);
  REQUIRE(s.segments() == 5);
  const Eigen::ArrayXd w = taper<double>(Taper::hann, 32);
  for (Eigen::Index r = 0; r < 5; ++r) {
    Eigen::VectorXd slice = x.segment(r * 16, 32);
    slice.array() -= slice.mean();
    const Eigen::VectorXcd ref = testing::naive_dft((slice.array() * w).matrix());
    CHECK((s.spectra.row(r).transpose() - ref).cwiseAbs().maxCoeff() < 1e-11);
  }
  CHECK(s.window_norm == doctest::Approx(w.cube().mean()));
}

TEST_CASE("zero padding keeps a single short segment") {
  std::mt19937_64 rng(4);
  const Eigen::VectorXd x = testing::gaussian(250, rng);
  SegmentPlan p;
  p.zero_pad = true;
  p.window = Taper::rectangular;
  p.remove_mean = false;
  const auto s = segment(x, p, 250.0);
  REQUIRE(s.segments() == 1);
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(256);
  padded.head(250) = x;
  CHECK((s.spectra.row(0).transpose() - testing::naive_dft(padded)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("bispectrum equals the brute-force triple product") {
  std::mt19937_64 rng(5);
  const Eigen::VectorXd x = testing::gaussian(64, rng);
  const auto b = bispectrum(segment(x, rect_plan(16), 1.0));
  CHECK((b.values - testing::naive_bispectrum(x, 16)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(b.kind == GridKind::bispectrum);
}

TEST_CASE("cross-bispectrum equals the brute-force B_xxy") {
  std::mt19937_64 rng(6);
  const Eigen::VectorXd x = testing::gaussian(48, rng);
  const Eigen::VectorXd y = testing::gaussian(48, rng);
  const auto plan = rect_plan(16);
  const auto b = cross_bispectrum(segment(x, plan, 1.0), segment(y, plan, 1.0));
  CHECK((b.values - testing::naive_bispectrum(x, 16, &y)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("auto- and self-cross-bispectrum are bit-identical") {
  std::mt19937_64 rng(7);
  const auto s = segment(testing::gaussian(512, rng), SegmentPlan{}, 250.0);
  CHECK(bispectrum(s).values == cross_bispectrum(s, s).values);
}

TEST_CASE("cross-bispectrum rejects mismatched spectra") {
  std::mt19937_64 rng(8);
  const auto a = segment(testing::gaussian(512, rng), SegmentPlan{}, 250.0);
  const auto b = segment(testing::gaussian(768, rng), SegmentPlan{}, 250.0);
  CHECK_THROWS_AS(cross_bispectrum(a, b), DataError);
}

TEST_CASE("bispectrum symmetries") {
  std::mt19937_64 rng(9);
  const auto b = bispectrum(segment(testing::gaussian(1024, rng), SegmentPlan{}, 250.0)).values;
  const Eigen::Index n = b.rows();
  CHECK(b == b.transpose());
  double worst = 0.0;
  for (Eigen::Index k1 = 0; k1 < n; ++k1)
    for (Eigen::Index k2 = 0; k2 < n; ++k2)
      worst = std::max(worst, std::abs(b((n - k1) % n, (n - k2) % n) - std::conj(b(k1, k2))));
  CHECK(worst < 1e-10);
}

TEST_CASE("bicoherence is a bounded real grid, independent of scale") {
  std::mt19937_64 rng(10);
  const Eigen::VectorXd x = testing::gaussian(2048, rng);
  const auto c1 = bicoherence(segment(x, SegmentPlan{}, 250.0));
  const auto c2 = bicoherence(segment(Eigen::VectorXd(3.5 * x), SegmentPlan{}, 250.0));
  CHECK(c1.kind == GridKind::bicoherence);
  CHECK(c1.values.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(c1.values.real().minCoeff() >= 0.0);
  CHECK(c1.values.real().maxCoeff() <= 1.0);
  CHECK((c1.values - c2.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("bicoherence matches a direct evaluation") {
  std::mt19937_64 rng(11);
  const Eigen::VectorXd x = testing::gaussian(128, rng);
  const auto plan = rect_plan(16);
  const auto c = bicoherence(segment(x, plan, 1.0));
  const Eigen::Index k = 8;
  std::vector<Eigen::VectorXcd> spectra;
  for (Eigen::Index r = 0; r < k; ++r) spectra.push_back(testing::naive_dft(x.segment(r * 16, 16)));
  for (Eigen::Index k1 = 0; k1 < 16; ++k1)
    for (Eigen::Index k2 = 0; k2 < 16; ++k2) {
      std::complex<double> num = 0.0;
      double pp = 0.0, p3 = 0.0;
      for (const auto& s : spectra) {
        num += s(k1) * s(k2) * std::conj(s((k1 + k2) % 16));
        pp += std::norm(s(k1) * s(k2));
        p3 += std::norm(s((k1 + k2) % 16));
      }
      const double den2 = pp / k * p3 / k;
      const double ref = den2 >= 1e-30 ? std::min(1.0, std::abs(num / static_cast<double>(k)) / std::sqrt(den2)) : 0.0;
      CHECK(c.values(k1, k2).real() == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("bicoherence needs two segments") {
  std::mt19937_64 rng(12);
  CHECK_THROWS_AS(bicoherence(segment(testing::gaussian(256, rng), SegmentPlan{}, 250.0)), DataError);
}

TEST_CASE("float instantiation tracks double") {
  std::mt19937_64 rng(13);
  const Eigen::VectorXd x = testing::gaussian(1024, rng);
  const Eigen::VectorXf xf = x.cast<float>();
  const auto bd = bispectrum(segment(x, SegmentPlan{}, 250.0));
  const auto bf = bispectrum(segment(xf, SegmentPlan{}, 250.0f));
  const double scale = bd.values.cwiseAbs().maxCoeff();
  CHECK((bf.values.cast<std::complex<double>>() - bd.values).cwiseAbs().maxCoeff() / scale < 1e-4);
}

TEST_CASE("principal region matches an exhaustive scan") {
  const Eigen::Index n = 256;
  const double fs = 250.0;
  const auto region = principal_region(n, fs, 1.0, 40.0);
  std::vector<BinPair> ref;
  for (Eigen::Index k1 = 0; k1 <= n / 2; ++k1)
    for (Eigen::Index k2 = 0; k2 <= k1; ++k2) {
      if (k1 + k2 > n / 2) continue;
      const double f1 = k1 * fs / n, f2 = k2 * fs / n;
      if (f1 >= 1.0 && f1 <= 40.0 && f2 >= 1.0 && f2 <= 40.0) ref.push_back({k1, k2});
    }
  CHECK(region == ref);
  CHECK(region.front() == BinPair{2, 2});
}

TEST_CASE("principal region errors") {
  CHECK_THROWS_AS(principal_region(256, 250.0, 40.0, 1.0), ConfigError);
  CHECK_THROWS_AS(principal_region(256, 250.0, 0.1, 0.2), DataError);
}

TEST_CASE("bin helpers") {
  CHECK(nearest_bin(14.0, 256, 250.0) == 14);
  SpectralGrid<double> g{Eigen::MatrixXcd::Zero(256, 256), 250.0, GridKind::bispectrum};
  CHECK(g.frequency(14) == doctest::Approx(13.671875));
  CHECK(g.frequency(255) == doctest::Approx(-250.0 / 256.0));
  CHECK(g.frequency(128) == doctest::Approx(125.0));
  g.values(20, 10) = {3.0, 4.0};
  g.values(10, 20) = {3.0, 4.0};
  CHECK(argmax_magnitude(g, principal_region(256, 250.0, 1.0, 40.0)) == BinPair{20, 10});
}

TEST_CASE("power spectrum is the per-bin segment mean of |X|^2") {
  std::mt19937_64 rng(14);
  const auto s = segment(testing::gaussian(1000, rng), SegmentPlan{}, 250.0);
  const Eigen::VectorXd p = power_spectrum(s);
  double ref = 0.0;
  for (Eigen::Index r = 0; r < s.segments(); ++r) ref += std::norm(s.spectra(r, 17));
  CHECK(p(17) == doctest::Approx(ref / s.segments()));
}
