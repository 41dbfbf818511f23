#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qzs/csv.hpp"
#include "qzs/errors.hpp"

using namespace qzs;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qzs_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<DiagnosticsRecord> random_records(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  std::vector<DiagnosticsRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {0.05 * static_cast<double>(i), d(gen), d(gen) * 1e-7, std::abs(d(gen)) * 1e-17, std::abs(d(gen)),
              i % 2 ? std::optional<double>(std::abs(d(gen)) * 1e-19) : std::nullopt, static_cast<int>(i % 31)};
  }
  return out;
}

}  // namespace

TEST(Csv, EmptyRecordsGiveHeaderOnly) {
  const std::string p = temp_path("empty.csv");
  write_diagnostics_csv({}, p);
  EXPECT_EQ(slurp(p), std::string(kDiagnosticsHeader) + "\n");
  EXPECT_TRUE(read_diagnostics_csv(p).empty());
}

TEST(Csv, RoundTripIsBitExact) {
  const std::string p = temp_path("roundtrip.csv");
  const auto recs = random_records(50, 7);
  write_diagnostics_csv(recs, p);
  const auto back = read_diagnostics_csv(p);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].t, recs[i].t);
    EXPECT_EQ(back[i].mass, recs[i].mass);
    EXPECT_EQ(back[i].energy, recs[i].energy);
    EXPECT_EQ(back[i].rm, recs[i].rm);
    EXPECT_EQ(back[i].rh, recs[i].rh);
    EXPECT_EQ(back[i].q_defect, recs[i].q_defect);
    EXPECT_EQ(back[i].fp_iterations, recs[i].fp_iterations);
  }
}

TEST(Csv, DeterministicBytes) {
  const auto recs = random_records(20, 3);
  write_diagnostics_csv(recs, temp_path("a.csv"));
  write_diagnostics_csv(recs, temp_path("b.csv"));
  EXPECT_EQ(slurp(temp_path("a.csv")), slurp(temp_path("b.csv")));
}

TEST(Csv, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(1.0), "1");
}

TEST(Csv, EmptyQDefectColumn) {
  const std::string p = temp_path("noq.csv");
  write_diagnostics_csv({DiagnosticsRecord{1.0, 2.0, 3.0, 0.0, 0.0, std::nullopt, 4}}, p);
  EXPECT_EQ(slurp(p), std::string(kDiagnosticsHeader) + "\n1,2,3,0,0,,4\n");
}

TEST(Csv, ReportRows) {
  ConvergenceReport r;
  r.axis = ConvergenceAxis::time;
  r.stages = 2;
  r.params = {0.25, 0.125};
  r.errors = {{1.6e-5, 3.2e-5}, {1e-6, 2e-6}};
  r.rates_e = {4.0};
  r.rates_n = {4.0};
  const std::string p = temp_path("report.csv");
  write_report_csv(r, p);
  EXPECT_EQ(slurp(p), std::string(kReportHeader) +
                          "\ntime,2,0,0.25,1.5999999999999999e-05,3.1999999999999999e-05,,\n"
                          "time,2,1,0.125,9.9999999999999995e-07,1.9999999999999999e-06,4,4\n");
}

TEST(Csv, UnwritablePathNamesPath) {
  try {
    write_diagnostics_csv({}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}
