#include "eht/dataset_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace eht {

namespace {

constexpr double kUnitaryTol = 1e-8;

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

void append_real(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

// The exact serialized text of a setting's unitaries; shared between the
// writer and the fingerprint so equality is byte-level.
std::string setting_reals(const MeasurementSetting& setting) {
  std::ostringstream out;
  for (const Matrix2cd& u : setting.unitaries) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        out << ' ';
        append_real(out, u(r, c).real());
        out << ' ';
        append_real(out, u(r, c).imag());
      }
    }
  }
  return out.str();
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t h = 14695981039346656037ULL) {
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

double parse_real(const std::string& token, const std::string& path, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) fail(path, line, "malformed real '" + token + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(path, line, "malformed real '" + token + "'");
  } catch (const std::out_of_range&) {
    fail(path, line, "real out of range '" + token + "'");
  }
}

std::uint64_t parse_u64(const std::string& token, const std::string& path,
                        int line, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(token, &pos);
    if (pos != token.size()) fail(path, line, "malformed " + what);
    return v;
  } catch (const std::invalid_argument&) {
    fail(path, line, "malformed " + what + " '" + token + "'");
  } catch (const std::out_of_range&) {
    fail(path, line, what + " out of range '" + token + "'");
  }
}

// Reads the next line, failing with a truncation diagnostic at EOF.
std::string next_line(std::istream& in, const std::string& path, int& line) {
  std::string text;
  if (!std::getline(in, text)) {
    fail(path, line + 1, "truncated file");
  }
  ++line;
  return text;
}

std::pair<std::string, std::string> header_kv(const std::string& text,
                                              const std::string& key,
                                              const std::string& path, int line) {
  std::istringstream in(text);
  std::string k, v, extra;
  if (!(in >> k >> v) || (in >> extra) || k != key) {
    fail(path, line, "expected '" + key + " <value>'");
  }
  return {k, v};
}

}  // namespace

std::string bitstring_of(std::size_t index, int n_sites) {
  if (n_sites <= 0 || n_sites >= 64) {
    throw std::invalid_argument("bitstring site count out of range");
  }
  if (index >> n_sites) {
    throw std::invalid_argument("basis index out of range for site count");
  }
  std::string bits(static_cast<std::size_t>(n_sites), '0');
  for (int s = 0; s < n_sites; ++s) {
    if ((index >> (n_sites - 1 - s)) & 1U) bits[static_cast<std::size_t>(s)] = '1';
  }
  return bits;
}

std::size_t index_of_bitstring(const std::string& bits) {
  if (bits.empty() || bits.size() >= 64) {
    throw std::invalid_argument("bitstring length out of range");
  }
  std::size_t index = 0;
  for (const char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("bitstring must contain only 0/1");
    }
    index = (index << 1) | static_cast<std::size_t>(ch == '1');
  }
  return index;
}

std::uint64_t setting_fingerprint(const MeasurementSetting& setting) {
  return fnv1a(setting_reals(setting));
}

void write_dataset(const Dataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "eht-dataset 1\n";
  out << "sites " << data.n_sites << "\n";
  out << "ensemble " << ensemble_name(data.ensemble) << "\n";
  out << "seed " << data.seed << "\n";
  out << "records " << data.records.size() << "\n";
  for (const MeasurementRecord& rec : data.records) {
    out << rec.setting.setting_id << setting_reals(rec.setting);
    for (const auto& [index, count] : rec.counts) {
      out << ' ' << bitstring_of(index, data.n_sites) << ':' << count;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int line = 0;

  {
    const std::string text = next_line(in, path, line);
    std::istringstream hdr(text);
    std::string magic, version, extra;
    if (!(hdr >> magic >> version) || (hdr >> extra) || magic != "eht-dataset") {
      fail(path, line, "not an eht-dataset file");
    }
    if (version != "1") {
      fail(path, line, "unsupported format version " + version);
    }
  }

  Dataset data;
  {
    const auto [k, v] = header_kv(next_line(in, path, line), "sites", path, line);
    data.n_sites = static_cast<int>(parse_u64(v, path, line, "site count"));
    if (data.n_sites < 1 || data.n_sites > 24) {
      fail(path, line, "site count out of range");
    }
  }
  {
    const auto [k, v] = header_kv(next_line(in, path, line), "ensemble", path, line);
    try {
      data.ensemble = ensemble_from_name(v);
    } catch (const std::invalid_argument& e) {
      fail(path, line, e.what());
    }
  }
  {
    const auto [k, v] = header_kv(next_line(in, path, line), "seed", path, line);
    data.seed = parse_u64(v, path, line, "seed");
  }
  std::size_t n_records = 0;
  {
    const auto [k, v] = header_kv(next_line(in, path, line), "records", path, line);
    n_records = parse_u64(v, path, line, "record count");
  }

  data.records.reserve(n_records);
  for (std::size_t r = 0; r < n_records; ++r) {
    const std::string text = next_line(in, path, line);
    std::istringstream rec_in(text);
    std::string token;
    if (!(rec_in >> token)) fail(path, line, "empty record line");

    MeasurementRecord rec;
    rec.setting.setting_id =
        static_cast<int>(parse_u64(token, path, line, "setting id"));
    rec.setting.unitaries.resize(static_cast<std::size_t>(data.n_sites));
    for (Matrix2cd& u : rec.setting.unitaries) {
      double vals[8];
      for (double& v : vals) {
        if (!(rec_in >> token)) fail(path, line, "record is missing unitary entries");
        v = parse_real(token, path, line);
      }
      u << cxd(vals[0], vals[1]), cxd(vals[2], vals[3]), cxd(vals[4], vals[5]),
          cxd(vals[6], vals[7]);
      if ((u.adjoint() * u - Matrix2cd::Identity()).norm() > kUnitaryTol) {
        fail(path, line, "matrix is not unitary within 1e-8");
      }
    }

    while (rec_in >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos) {
        fail(path, line, "malformed counts token '" + token + "'");
      }
      const std::string bits = token.substr(0, colon);
      if (static_cast<int>(bits.size()) != data.n_sites) {
        fail(path, line, "bitstring length does not match site count");
      }
      std::size_t index = 0;
      try {
        index = index_of_bitstring(bits);
      } catch (const std::invalid_argument& e) {
        fail(path, line, e.what());
      }
      const std::uint64_t count =
          parse_u64(token.substr(colon + 1), path, line, "count");
      if (count == 0) fail(path, line, "zero count for '" + bits + "'");
      if (!rec.counts.emplace(index, count).second) {
        fail(path, line, "duplicate bitstring '" + bits + "'");
      }
      rec.n_shots += count;
    }
    if (rec.counts.empty()) fail(path, line, "record has no counts");
    data.records.push_back(std::move(rec));
  }

  std::string trailing;
  while (std::getline(in, trailing)) {
    ++line;
    if (trailing.find_first_not_of(" \t\r") != std::string::npos) {
      fail(path, line, "unexpected content after records");
    }
  }

  try {
    data.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return data;
}

void write_fit_result(const FitResult& result, const AnsatzFamily& family,
                      const RunStamp& stamp,
                      const std::vector<std::uint64_t>& data_fingerprints,
                      const std::string& path) {
  if (result.params.g.size() != family.n_params()) {
    throw std::invalid_argument("fit result does not match the family");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << std::setprecision(17);
  out << "eht-fit 1\n";
  out << "config " << stamp.config_hash << "\n";
  out << "seed " << stamp.seed << "\n";
  out << "ansatz " << ansatz_kind_name(family.kind()) << "\n";
  out << "sites";
  for (const int s : family.sites()) out << ' ' << s;
  out << "\n";
  out << "chi2 " << result.chi2 << "\n";
  out << "p " << result.params.p << ' ' << result.p_error << "\n";
  out << "entropy_bits " << result.entropy_bits << ' ' << result.entropy_error
      << "\n";
  out << "converged " << (result.diagnostics.converged ? 1 : 0) << "\n";
  out << "iterations " << result.diagnostics.iterations << "\n";
  out << "params " << family.n_params() << "\n";
  const bool have_errors = result.param_errors.size() == family.n_params();
  for (int k = 0; k < family.n_params(); ++k) {
    out << family.params()[static_cast<std::size_t>(k)].label << ' '
        << result.params.g(k) << ' ' << (have_errors ? result.param_errors(k) : 0.0)
        << "\n";
  }
  out << "spectrum " << result.spectrum.xis.size();
  for (const double xi : result.spectrum.xis) out << ' ' << xi;
  out << "\n";
  out << "fingerprints " << data_fingerprints.size() << std::hex;
  for (const std::uint64_t f : data_fingerprints) out << ' ' << f;
  out << std::dec << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

StoredFit read_fit_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  int line = 0;

  {
    const std::string text = next_line(in, path, line);
    std::istringstream hdr(text);
    std::string magic, version, extra;
    if (!(hdr >> magic >> version) || (hdr >> extra) || magic != "eht-fit") {
      fail(path, line, "not an eht-fit file");
    }
    if (version != "1") fail(path, line, "unsupported format version " + version);
  }

  StoredFit fit;
  fit.stamp.config_hash =
      header_kv(next_line(in, path, line), "config", path, line).second;
  fit.stamp.seed = parse_u64(
      header_kv(next_line(in, path, line), "seed", path, line).second, path, line,
      "seed");
  fit.ansatz = header_kv(next_line(in, path, line), "ansatz", path, line).second;
  {
    const std::string text = next_line(in, path, line);
    std::istringstream sin(text);
    std::string key;
    sin >> key;
    if (key != "sites") fail(path, line, "expected 'sites ...'");
    int s = 0;
    while (sin >> s) fit.sites.push_back(s);
    if (fit.sites.empty()) fail(path, line, "empty site list");
  }
  fit.chi2 = parse_real(
      header_kv(next_line(in, path, line), "chi2", path, line).second, path, line);
  {
    const std::string text = next_line(in, path, line);
    std::istringstream pin(text);
    std::string key, a, b;
    if (!(pin >> key >> a >> b) || key != "p") fail(path, line, "expected 'p <v> <err>'");
    fit.p = parse_real(a, path, line);
    fit.p_error = parse_real(b, path, line);
  }
  {
    const std::string text = next_line(in, path, line);
    std::istringstream ein(text);
    std::string key, a, b;
    if (!(ein >> key >> a >> b) || key != "entropy_bits") {
      fail(path, line, "expected 'entropy_bits <v> <err>'");
    }
    fit.entropy_bits = parse_real(a, path, line);
    fit.entropy_error = parse_real(b, path, line);
  }
  fit.converged = parse_u64(
                      header_kv(next_line(in, path, line), "converged", path, line)
                          .second,
                      path, line, "flag") != 0;
  fit.iterations = static_cast<int>(parse_u64(
      header_kv(next_line(in, path, line), "iterations", path, line).second, path,
      line, "iteration count"));

  const std::size_t n_params = parse_u64(
      header_kv(next_line(in, path, line), "params", path, line).second, path,
      line, "parameter count");
  fit.values.resize(static_cast<Eigen::Index>(n_params));
  fit.errors.resize(static_cast<Eigen::Index>(n_params));
  for (std::size_t k = 0; k < n_params; ++k) {
    const std::string text = next_line(in, path, line);
    std::istringstream pin(text);
    std::string label, a, b, extra;
    if (!(pin >> label >> a >> b) || (pin >> extra)) {
      fail(path, line, "expected '<label> <value> <error>'");
    }
    fit.labels.push_back(label);
    fit.values(static_cast<Eigen::Index>(k)) = parse_real(a, path, line);
    fit.errors(static_cast<Eigen::Index>(k)) = parse_real(b, path, line);
  }

  {
    const std::string text = next_line(in, path, line);
    std::istringstream sin(text);
    std::string key;
    std::size_t n = 0;
    if (!(sin >> key >> n) || key != "spectrum") {
      fail(path, line, "expected 'spectrum <n> ...'");
    }
    std::string token;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(sin >> token)) fail(path, line, "spectrum is shorter than declared");
      fit.spectrum.push_back(parse_real(token, path, line));
    }
    if (sin >> token) fail(path, line, "spectrum is longer than declared");
  }
  {
    const std::string text = next_line(in, path, line);
    std::istringstream fin(text);
    std::string key;
    std::size_t n = 0;
    if (!(fin >> key >> n) || key != "fingerprints") {
      fail(path, line, "expected 'fingerprints <n> ...'");
    }
    std::string token;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(fin >> token)) fail(path, line, "fingerprint list is shorter than declared");
      try {
        std::size_t pos = 0;
        fit.data_fingerprints.push_back(std::stoull(token, &pos, 16));
        if (pos != token.size()) fail(path, line, "malformed fingerprint");
      } catch (const std::logic_error&) {
        fail(path, line, "malformed fingerprint '" + token + "'");
      }
    }
    if (fin >> token) fail(path, line, "fingerprint list is longer than declared");
  }
  return fit;
}

ParamVector params_from_stored(const StoredFit& stored,
                               const AnsatzFamily& family) {
  if (static_cast<int>(stored.labels.size()) != family.n_params()) {
    throw std::invalid_argument("stored fit has a different parameter count");
  }
  ParamVector params;
  params.g = VectorXd::Zero(family.n_params());
  params.p = stored.p;
  for (std::size_t k = 0; k < stored.labels.size(); ++k) {
    params.g(family.param_index(stored.labels[k])) =
        stored.values(static_cast<Eigen::Index>(k));
  }
  return params;
}

}  // namespace eht
