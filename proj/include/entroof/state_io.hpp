#pragma once

// Text state files.
//
//   dims: 2 2
//   kind: density            (or: pure)
//   0.5+0j 0+0j 0+0j 0.5+0j  (one matrix row per line; a pure state is one line)
//   ...
//
// Entries are `re+imj` / `re-imj`. Numbers are written in the shortest form
// that round-trips exactly, so write(read(text)) reproduces canonical text
// bit for bit. Parsing is locale-independent. Lines starting with '#' and
// blank lines are ignored on input.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "entroof/errors.hpp"
#include "entroof/qstate.hpp"

namespace entroof {

using AnyState = std::variant<DensityMatrix, PureState>;

namespace io_detail {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ValidationError("format", "line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
  }
  if (!std::isfinite(v)) {
    throw ValidationError("format", "line " + std::to_string(line) + ": non-finite number '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace io_detail

/// `re+imj` / `re-imj`
inline std::string format_entry(cplx z) {
  const double im = z.imag();
  const bool negative = std::signbit(im);
  return io_detail::format_double(z.real()) + (negative ? "-" : "+") +
         io_detail::format_double(negative ? -im : im) + "j";
}

inline cplx parse_entry(std::string_view tok, std::size_t line = 0) {
  if (tok.size() < 4 || tok.back() != 'j') {
    throw ValidationError("format", "line " + std::to_string(line) + ": entry '" + std::string(tok) +
                                        "' is not of the form re+imj");
  }
  std::string_view body = tok.substr(0, tok.size() - 1);
  // the imaginary part starts at the last sign that is not an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos || split + 1 >= body.size()) {
    throw ValidationError("format", "line " + std::to_string(line) + ": entry '" + std::string(tok) +
                                        "' has no imaginary part");
  }
  const double re = io_detail::parse_double(body.substr(0, split), line);
  const std::string_view im_digits = body.substr(split + 1);
  if (im_digits.front() == '+' || im_digits.front() == '-') {
    throw ValidationError("format", "line " + std::to_string(line) + ": doubled sign in '" + std::string(tok) + "'");
  }
  const double im = io_detail::parse_double(im_digits, line);
  return {re, body[split] == '-' ? -im : im};
}

inline void write_state(std::ostream& os, const DensityMatrix& rho) {
  os << "dims:";
  for (auto d : rho.dims()) os << ' ' << d;
  os << "\nkind: density\n";
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_entry(m(i, j));
    os << '\n';
  }
}

inline void write_state(std::ostream& os, const PureState& psi) {
  os << "dims:";
  for (auto d : psi.dims()) os << ' ' << d;
  os << "\nkind: pure\n";
  const auto& a = psi.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? " " : "") << format_entry(a[i]);
  os << '\n';
}

inline void write_state(std::ostream& os, const AnyState& s) {
  std::visit([&](const auto& st) { write_state(os, st); }, s);
}

template <typename State>
std::string format_state(const State& s) {
  std::ostringstream os;
  write_state(os, s);
  return os.str();
}

inline AnyState read_state(std::istream& is) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto toks = io_detail::split_ws(raw);
    if (toks.empty() || toks.front().front() == '#') continue;
    lines.emplace_back(lineno, raw);
  }
  if (lines.size() < 3) throw ValidationError("format", "state file needs a dims line, a kind line and data rows");

  auto header = [&](std::size_t idx, std::string_view key) {
    const auto& [no, text] = lines[idx];
    const std::string_view sv(text);
    const std::string prefix = std::string(key) + ":";
    if (sv.substr(0, prefix.size()) != prefix) {
      throw ValidationError("format", "line " + std::to_string(no) + ": expected '" + prefix + "'");
    }
    return io_detail::split_ws(sv.substr(prefix.size()));
  };

  Dims dims;
  for (auto tok : header(0, "dims")) {
    std::size_t d = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || d == 0) {
      throw ValidationError("format", "line " + std::to_string(lines[0].first) + ": bad dimension '" +
                                          std::string(tok) + "'");
    }
    dims.push_back(d);
  }
  if (dims.empty()) throw ValidationError("dimension", "dims line lists no parties");
  const auto kind_toks = header(1, "kind");
  if (kind_toks.size() != 1 || (kind_toks[0] != "density" && kind_toks[0] != "pure")) {
    throw ValidationError("format", "line " + std::to_string(lines[1].first) + ": kind must be 'density' or 'pure'");
  }
  const bool pure = kind_toks[0] == "pure";
  const std::size_t d = total_dim(dims);

  std::vector<std::vector<cplx>> rows;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    std::vector<cplx> row;
    for (auto tok : io_detail::split_ws(lines[k].second)) row.push_back(parse_entry(tok, lines[k].first));
    rows.push_back(std::move(row));
  }

  if (pure) {
    if (rows.size() != 1 || rows[0].size() != d) {
      std::size_t count = 0;
      for (const auto& r : rows) count += r.size();
      throw ValidationError("dimension", "dims " + dims_string(dims) + " need " + std::to_string(d) +
                                             " amplitudes on one line, got " + std::to_string(count) + " on " +
                                             std::to_string(rows.size()) + " line(s)");
    }
    return PureState(dims, rows[0]);
  }
  if (rows.size() != d) {
    throw ValidationError("dimension", "dims " + dims_string(dims) + " need " + std::to_string(d) + " rows, got " +
                                           std::to_string(rows.size()));
  }
  std::vector<cplx> entries;
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw ValidationError("dimension", "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                             " entries, expected " + std::to_string(d));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  ComplexMatrix m;
  try {
    m = ComplexMatrix(d, d, std::move(entries));
  } catch (const InvalidArgument& e) {
    throw ValidationError("format", e.what());
  }
  return DensityMatrix(dims, m);
}

inline AnyState parse_state(const std::string& text) {
  std::istringstream is(text);
  return read_state(is);
}

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open state file '" + path + "'");
  return read_state(in);
}

template <typename State>
void save_state(const std::string& path, const State& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write state file '" + path + "'");
  write_state(out, s);
}

/// Density matrix of either kind of state.
inline DensityMatrix as_density(const AnyState& s) {
  if (const auto* rho = std::get_if<DensityMatrix>(&s)) return *rho;
  return DensityMatrix::from_pure(std::get<PureState>(s));
}

}  // namespace entroof
