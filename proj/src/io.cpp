#include "wf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace wf {

namespace {

/// Locale-independent float parse (decimal point only).
double parse_double(std::string_view token, const std::string& path, int line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw IoError(path + ":" + std::to_string(line) + ": malformed float '" + std::string(token) +
                  "'");
  if (!std::isfinite(value))
    throw IoError(path + ":" + std::to_string(line) + ": non-finite value rejected");
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CMatrix parse_vector_block(std::ifstream& in, const std::string& path, Eigen::Index n,
                           Eigen::Index m) {
  CMatrix vectors(m, n);
  std::string line;
  for (Eigen::Index row = 0; row < m; ++row) {
    if (!std::getline(in, line))
      throw IoError(path + ":" + std::to_string(row + 2) + ": expected " + std::to_string(m) +
                    " data rows, file ended early");
    const auto tokens = split_ws(line);
    if (static_cast<Eigen::Index>(tokens.size()) != 2 * n)
      throw IoError(path + ":" + std::to_string(row + 2) + ": expected " + std::to_string(2 * n) +
                    " floats, got " + std::to_string(tokens.size()));
    for (Eigen::Index col = 0; col < n; ++col)
      vectors(row, col) = Complex(parse_double(tokens[2 * col], path, row + 2),
                                  parse_double(tokens[2 * col + 1], path, row + 2));
  }
  if (std::getline(in, line) && !split_ws(line).empty())
    throw IoError(path + ":" + std::to_string(m + 2) + ": trailing data beyond declared rows");
  return vectors;
}

std::pair<Eigen::Index, Eigen::Index> parse_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ":1: missing header line");
  const auto tokens = split_ws(line);
  if (tokens.size() != 2) throw IoError(path + ":1: header must be 'N M'");
  const auto parse_dim = [&](std::string_view tok) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 1)
      throw IoError(path + ":1: bad dimension '" + std::string(tok) + "'");
    return static_cast<Eigen::Index>(v);
  };
  return {parse_dim(tokens[0]), parse_dim(tokens[1])};
}

}  // namespace

SamplingEnsemble parse_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  const auto [n, m] = parse_header(in, path);
  return ensemble_from_vectors(parse_vector_block(in, path, n, m), EnsembleModel::file);
}

CVector parse_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  const auto [n, m] = parse_header(in, path);
  if (m != 1) throw IoError(path + ":1: signal files must declare 'N 1'");
  return parse_vector_block(in, path, n, 1).row(0).transpose();
}

void write_ensemble(const SamplingEnsemble& ensemble, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << ensemble.n() << " " << ensemble.m() << "\n";
  for (Eigen::Index row = 0; row < ensemble.m(); ++row) {
    const CVector a = ensemble.vector(row);
    for (Eigen::Index col = 0; col < ensemble.n(); ++col) {
      if (col) out << " ";
      out << format_full(a[col].real()) << " " << format_full(a[col].imag());
    }
    out << "\n";
  }
  if (!out) throw IoError(path + ": write failed");
}

void write_signal(const CVector& signal, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << signal.size() << " 1\n";
  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    if (i) out << " ";
    out << format_full(signal[i].real()) << " " << format_full(signal[i].imag());
  }
  out << "\n";
  if (!out) throw IoError(path + ": write failed");
}

std::string format_sig12(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << header << "\n";
  for (const std::string& row : rows) out << row << "\n";
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace wf
