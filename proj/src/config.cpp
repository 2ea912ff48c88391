#include "eegbci/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace eegbci {

namespace {

template <typename F>
void for_each_field(ToolConfig& c, F&& f) {
  auto& pp = c.pipeline.preprocess;
  f("preprocess", "trim_s", pp.trim_s);
  f("preprocess", "enable_bandpass", pp.enable_bandpass);
  f("preprocess", "lo_hz", pp.lo_hz);
  f("preprocess", "hi_hz", pp.hi_hz);
  f("preprocess", "order", pp.order);
  f("preprocess", "enable_notch", pp.enable_notch);
  f("preprocess", "notch_hz", pp.notch_hz);
  f("preprocess", "notch_q", pp.notch_q);
  f("preprocess", "enable_standardize", pp.enable_standardize);

  auto& sp = c.pipeline.spectrogram;
  f("spectrogram", "window_samples", sp.window_samples);
  f("spectrogram", "hop_samples", sp.hop_samples);
  f("spectrogram", "band_lo_hz", sp.band_lo_hz);
  f("spectrogram", "band_hi_hz", sp.band_hi_hz);

  f("csp", "n_components", c.pipeline.csp.n_components);
  f("csp", "shrinkage", c.pipeline.csp.shrinkage);

  auto& h = c.pipeline.hyper;
  f("classifiers", "logreg_lambda", h.logreg_lambda);
  f("classifiers", "logreg_max_iter", h.logreg_max_iter);
  f("classifiers", "logreg_tol", h.logreg_tol);
  f("classifiers", "svm_c", h.svm_c);
  f("classifiers", "svm_epochs", h.svm_epochs);
  f("classifiers", "knn_k", h.knn_k);
  f("classifiers", "qda_shrinkage", h.qda_shrinkage);
  f("classifiers", "tree_max_depth", h.tree_max_depth);
  f("classifiers", "tree_min_samples_split", h.tree_min_samples_split);

  f("split", "train_ratio", c.pipeline.train_ratio);
  f("split", "cv_folds", c.pipeline.cv_folds);
  f("split", "epoch_seconds", c.pipeline.epoch_seconds);

  auto& s = c.synth;
  f("synth", "rate_hz", s.rate_hz);
  f("synth", "snr", s.snr);
  f("synth", "wifi_wavelets", s.wifi_wavelets);
  f("synth", "wavelet_channel", s.wavelet_channel);
  f("synth", "wavelet_amplitude", s.wavelet_amplitude);
  f("synth", "noisy_channel", s.noisy_channel);
  f("synth", "noisy_channel_name", s.noisy_channel_name);
  f("synth", "noisy_variance", s.noisy_variance);
  f("synth", "head_spike", s.head_spike);
  f("synth", "harmonic_gain_10hz", s.harmonic_gain_10hz);
  f("synth", "harmonic_gain_15hz", s.harmonic_gain_15hz);
  f("synth", "lateral_ratio", s.lateral_ratio);
  f("synth", "alpha_snr", s.alpha_snr);
  f("synth", "head_s", s.head_s);
  f("synth", "prompt_s", s.prompt_s);
  f("synth", "stimulus_s", s.stimulus_s);
  f("synth", "gap_s", s.gap_s);
  f("synth", "tail_s", s.tail_s);
  f("synth", "sessions", s.sessions);
  f("synth", "trials_per_session", s.trials_per_session);
  f("synth", "last_session_laryngeal_imagery_trials", s.last_session_laryngeal_imagery_trials);
}

[[noreturn]] void bad_value(const std::string& where, const std::string& text, const char* kind) {
  throw Error(ErrorCode::InvalidArgument, where + ": '" + text + "' is not a valid " + kind);
}

template <typename T>
void parse_number(const std::string& where, const std::string& text, T& out, const char* kind) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) bad_value(where, text, kind);
  out = value;
}

void assign(const std::string& where, const std::string& text, double& out) {
  parse_number(where, text, out, "number");
}
void assign(const std::string& where, const std::string& text, int& out) {
  parse_number(where, text, out, "integer");
}
void assign(const std::string& where, const std::string& text, std::size_t& out) {
  parse_number(where, text, out, "non-negative integer");
}
void assign(const std::string& where, const std::string& text, bool& out) {
  if (text == "true" || text == "1" || text == "yes" || text == "on")
    out = true;
  else if (text == "false" || text == "0" || text == "no" || text == "off")
    out = false;
  else
    bad_value(where, text, "boolean");
}
void assign(const std::string&, const std::string& text, std::string& out) { out = text; }

std::string render(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string render(int v) { return std::to_string(v); }
std::string render(std::size_t v) { return std::to_string(v); }
std::string render(bool v) { return v ? "true" : "false"; }
std::string render(const std::string& v) { return v; }

}  // namespace

ToolConfig parse_config(std::istream& in, const std::string& source_name) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Format, source_name + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  ToolConfig c;
  std::set<std::string> known;
  for_each_field(c, [&](const char* section, const char* key, auto&) {
    known.insert(std::string(section) + "." + key);
  });
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorCode::InvalidArgument, source_name + ": key '" + section + "' outside a section");
    for (const auto& [key, value] : body)
      if (!known.count(section + "." + key))
        throw Error(ErrorCode::InvalidArgument, source_name + ": unknown config key " + section + "." + key);
  }
  for_each_field(c, [&](const char* section, const char* key, auto& field) {
    const std::string path = std::string(section) + "." + key;
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.')))
      assign(source_name + ": " + path, *v, field);
  });
  c.pipeline.preprocess.validate(c.synth.rate_hz);
  c.synth.validate();
  return c;
}

ToolConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string canonical_config(const ToolConfig& config) {
  ToolConfig copy = config;
  std::ostringstream out;
  for_each_field(copy, [&](const char* section, const char* key, auto& field) {
    out << section << '.' << key << '=' << render(field) << '\n';
  });
  return out.str();
}

std::string config_hash(const ToolConfig& config) {
  const std::string text = canonical_config(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::InvalidArgument, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace eegbci
