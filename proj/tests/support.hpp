#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "eegbci/error.hpp"
#include "eegbci/random.hpp"
#include "eegbci/types.hpp"

namespace testing {

// Runs f and returns the code it threw. Fails loudly when nothing is thrown.
template <typename F>
eegbci::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const eegbci::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an eegbci::Error");
}

inline std::vector<double> sine(double f_hz, double rate, std::size_t n, double amp = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * f_hz * static_cast<double>(i) / rate + phase);
  return x;
}

// Textbook O(n^2) transform used as the FFT oracle.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline eegbci::Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  eegbci::Rng rng(seed);
  eegbci::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("eegbci-" + tag + "-" + std::to_string(eegbci::mix_seed(reinterpret_cast<std::uintptr_t>(this)) % 1000000));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with stdout/stderr captured to files inside `dir`.
inline RunResult run_cli(const std::string& args, const std::filesystem::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(EEGBCI_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace testing
