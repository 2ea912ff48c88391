#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eegbci/io.hpp"

namespace eegbci {

namespace {

constexpr std::string_view kMagic = "BCIREC1 ";

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffU) << 24) | ((v & 0xff00U) << 8) | ((v >> 8) & 0xff00U) | (v >> 24);
  }
}

}  // namespace

Recording read_recording(std::istream& in, const std::string& source_name) {
  std::string header;
  if (!std::getline(in, header))
    throw Error(ErrorCode::Format, source_name + ": missing header line");
  if (header.compare(0, kMagic.size(), kMagic) != 0)
    throw Error(ErrorCode::Format, source_name + ": not a BCIREC1 file");

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header.substr(kMagic.size()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, source_name + ": malformed header: " + e.what());
  }

  double rate = 0.0;
  std::vector<std::string> names;
  std::int64_t n_samples = -1;
  Metadata meta;
  try {
    rate = h.at("rate_hz").get<double>();
    names = h.at("layout").get<std::vector<std::string>>();
    n_samples = h.at("n_samples").get<std::int64_t>();
    if (h.contains("meta")) meta = h.at("meta").get<Metadata>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, source_name + ": malformed header: " + e.what());
  }
  if (n_samples < 0) throw Error(ErrorCode::Format, source_name + ": negative n_samples");

  const auto n_ch = names.size();
  const auto n = static_cast<std::size_t>(n_samples);

  std::vector<char> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t expected = n_ch * n * sizeof(float);
  if (payload.size() != expected) {
    // A whole number of channel rows of the declared length is a channel-count
    // disagreement; anything else is truncation or garbage.
    const std::size_t row_bytes = n * sizeof(float);
    if (row_bytes > 0 && payload.size() % row_bytes == 0)
      throw Error(ErrorCode::ChannelMismatch,
                  source_name + ": header declares " + std::to_string(n_ch) +
                      " channels but payload holds " + std::to_string(payload.size() / row_bytes));
    throw Error(ErrorCode::Format, source_name + ": payload size " + std::to_string(payload.size()) +
                                       " does not match header (" + std::to_string(expected) + ")");
  }

  Matrix data(static_cast<Eigen::Index>(n_ch), static_cast<Eigen::Index>(n));
  for (std::size_t c = 0; c < n_ch; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits;
      std::memcpy(&bits, payload.data() + (c * n + i) * sizeof(float), sizeof bits);
      const float v = std::bit_cast<float>(to_little_endian(bits));
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFinite, source_name + ": non-finite sample at channel " +
                                              names[c] + ", index " + std::to_string(i));
      data(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return Recording(std::move(data), rate, ChannelLayout(std::move(names)), std::move(meta));
}

void write_recording(const Recording& rec, std::ostream& out) {
  nlohmann::json h;
  h["rate_hz"] = rec.rate_hz();
  h["layout"] = rec.layout().names();
  h["meta"] = rec.meta();
  h["n_samples"] = rec.n_samples();
  out << kMagic << h.dump() << '\n';

  const auto& d = rec.data();
  std::vector<char> buf(static_cast<std::size_t>(d.size()) * sizeof(float));
  std::size_t k = 0;
  for (Eigen::Index c = 0; c < d.rows(); ++c) {
    for (Eigen::Index i = 0; i < d.cols(); ++i, ++k) {
      const auto bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(d(c, i))));
      std::memcpy(buf.data() + k * sizeof(float), &bits, sizeof bits);
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Recording load_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_recording(in, path.string());
}

void save_recording(const Recording& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_recording(rec, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Recording import_csv(const std::filesystem::path& path, double rate_hz) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Format, path.string() + ": empty CSV");
  auto names = split(line);

  std::vector<std::vector<double>> columns(names.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != names.size())
      throw Error(ErrorCode::ChannelMismatch,
                  path.string() + ": row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " values for " +
                      std::to_string(names.size()) + " channels");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        columns[c].push_back(std::stod(cells[c]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Format, path.string() + ": bad number '" + cells[c] + "' on row " +
                                           std::to_string(row));
      }
    }
  }

  const auto n = columns.empty() ? 0 : columns.front().size();
  Matrix data(static_cast<Eigen::Index>(names.size()), static_cast<Eigen::Index>(n));
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) data(c, i) = columns[c][i];
  return Recording(std::move(data), rate_hz, ChannelLayout(std::move(names)),
                   {{"source", path.filename().string()}});
}

}  // namespace eegbci
