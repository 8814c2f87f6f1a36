#include "casa/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "casa/error.hpp"
#include "casa/experiments.hpp"
#include "casa/wav.hpp"

namespace casa {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_real(const std::string& text, const std::string& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw FormatError(where + ": '" + text + "' is not a number");
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw FormatError(where + ": '" + text + "' is not a non-negative integer");
  return v;
}

std::string where(std::size_t line, const std::string& key) {
  return "line " + std::to_string(line) + ", field '" + key + "'";
}

// Each non-comment line is `key = value`.
template <class Fn>
void for_each_field(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(raw);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw FormatError("line " + std::to_string(line) + ": expected 'key = value'");
    fn(line, lower(trim(std::string_view(content).substr(0, eq))), trim(std::string_view(content).substr(eq + 1)));
  }
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

EvaluationManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  EvaluationManifest m;
  std::set<std::string> seen;
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  for_each_field(text, [&](std::size_t line, const std::string& key, const std::string& value) {
    const auto at = where(line, key);
    if (value.empty()) throw FormatError(at + ": empty value");
    if (key == "reference" || key == "prediction") {
      const auto split = value.find_first_of(" \t");
      if (split == std::string::npos) throw FormatError(at + ": expected '<label> <path>'");
      const std::string label_text = value.substr(0, split);
      const std::string path = trim(std::string_view(value).substr(split));
      const auto label = ClassLabel::parse(label_text);
      if (key == "reference" && label.is_none()) throw FormatError(at + ": reference labels must be class names");
      (key == "reference" ? m.references : m.predictions).push_back({resolve(path), label});
      return;
    }
    if (!seen.insert(key).second) throw FormatError(at + ": given more than once");
    try {
      if (key == "variant") {
        m.config.variant = parse_variant(value);
      } else if (key == "penalty") {
        m.config.penalty = parse_penalty(value);
      } else if (key == "application") {
        m.config.application = parse_application(value);
      } else if (key == "cap_db") {
        m.config.sdr_cap_db = parse_real(value, at);
      } else if (key == "mixture") {
        m.mixture = resolve(value);
      } else if (key == "channel") {
        m.channel = static_cast<unsigned>(parse_count(value, at));
      } else {
        throw FormatError("unknown field");
      }
    } catch (const FormatError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw FormatError(at + ": " + msg);
    }
  });

  if (m.references.empty()) throw FormatError("field 'reference': at least one reference is required");
  if (m.predictions.empty()) throw FormatError("field 'prediction': at least one prediction is required");
  return m;
}

EvaluationManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_manifest(text.str(), path.parent_path());
}

std::string format_manifest(const EvaluationManifest& m) {
  std::ostringstream out;
  out << "variant = " << to_string(m.config.variant) << '\n'
      << "penalty = " << to_string(m.config.penalty) << '\n'
      << "application = " << to_string(m.config.application) << '\n'
      << "cap_db = " << format_double(m.config.sdr_cap_db) << '\n';
  if (m.channel) out << "channel = " << *m.channel << '\n';
  if (m.mixture) out << "mixture = " << m.mixture->string() << '\n';
  for (const auto& r : m.references) out << "reference = " << r.label.to_string() << ' ' << r.path.string() << '\n';
  for (const auto& p : m.predictions) out << "prediction = " << p.label.to_string() << ' ' << p.path.string() << '\n';
  return out.str();
}

MetricReport evaluate_manifest(const EvaluationManifest& m) {
  m.config.validate();
  if (m.config.penalty == Penalty::InputLevel && !m.mixture)
    throw ConfigError("field 'mixture': required by the input-level penalty");
  if (m.config.variant == Variant::Classical && m.references.size() != m.predictions.size())
    throw DimensionError("classical SDR needs as many predictions as references");

  const auto load = [&](const std::vector<ManifestEntry>& entries) {
    std::vector<LabeledSource> out;
    for (const auto& e : entries) out.push_back({load_audio(e.path, m.channel), e.label});
    return out;
  };
  const auto references = load(m.references);
  const auto predictions = load(m.predictions);
  std::optional<AudioSignal> mixture;
  if (m.mixture) mixture = load_audio(*m.mixture, m.channel);

  const auto& first = references.front().signal;
  for (const auto& r : references) require_compatible(r.signal, first);
  for (const auto& p : predictions) require_compatible(p.signal, first);
  if (mixture) require_compatible(*mixture, first);

  return evaluate(predictions, references, mixture ? &*mixture : nullptr, m.config);
}

void write_report(const MetricReport& report, std::ostream& out) {
  const auto opt_index = [](const std::optional<std::size_t>& i) { return i ? std::to_string(*i) : std::string("-"); };
  const auto opt_label = [](const std::optional<ClassLabel>& l) { return l ? l->to_string() : std::string("-"); };

  out << "# casa-sdr report v1\n"
      << "variant = " << to_string(report.config.variant) << '\n'
      << "penalty = " << to_string(report.config.penalty) << '\n'
      << "application = " << to_string(report.config.application) << '\n'
      << "cap_db = " << format_double(report.config.sdr_cap_db) << '\n'
      << "final_db = " << format_double(report.final_db) << '\n'
      << "denominator = " << report.denominator << '\n'
      << "tp = " << report.counts.tp << '\n'
      << "fn = " << report.counts.fn << '\n'
      << "fp = " << report.counts.fp << '\n';
  if (report.assignment) {
    out << "total_sdr = " << format_double(report.assignment->total_sdr) << '\n';
    for (const auto& p : report.assignment->pairs) out << "pair = " << p.estimate << ' ' << p.reference << '\n';
    const auto& m = report.assignment->sdr_matrix;
    for (std::size_t r = 0; r < m.references(); ++r) {
      out << "sdr_row =";
      for (std::size_t c = 0; c < m.estimates(); ++c) out << ' ' << format_double(m.at(r, c));
      out << '\n';
    }
  }
  out << "# source = ref_index ref_label est_index est_label tag raw_sdr_db penalty_db contribution_db\n";
  for (const auto& s : report.per_source) {
    out << "source = " << opt_index(s.reference_index) << ' ' << opt_label(s.reference_label) << ' '
        << opt_index(s.estimate_index) << ' ' << opt_label(s.estimate_label) << ' ' << to_string(s.tag) << ' '
        << (s.raw_sdr_db ? format_double(*s.raw_sdr_db) : std::string("-")) << ' ' << format_double(s.penalty_db)
        << ' ' << format_double(s.contribution_db) << '\n';
  }
}

MetricReport read_report(const std::string& text) {
  MetricReport report;
  std::vector<std::vector<double>> rows;
  std::optional<double> total;
  std::vector<MatchedPair> pairs;

  for_each_field(text, [&](std::size_t line, const std::string& key, const std::string& value) {
    const auto at = where(line, key);
    if (key == "variant") {
      report.config.variant = parse_variant(value);
    } else if (key == "penalty") {
      report.config.penalty = parse_penalty(value);
    } else if (key == "application") {
      report.config.application = parse_application(value);
    } else if (key == "cap_db") {
      report.config.sdr_cap_db = parse_real(value, at);
    } else if (key == "final_db") {
      report.final_db = parse_real(value, at);
    } else if (key == "denominator") {
      report.denominator = parse_count(value, at);
    } else if (key == "tp") {
      report.counts.tp = parse_count(value, at);
    } else if (key == "fn") {
      report.counts.fn = parse_count(value, at);
    } else if (key == "fp") {
      report.counts.fp = parse_count(value, at);
    } else if (key == "total_sdr") {
      total = parse_real(value, at);
    } else if (key == "pair") {
      const auto t = split_ws(value);
      if (t.size() != 2) throw FormatError(at + ": expected '<estimate> <reference>'");
      pairs.push_back({parse_count(t[0], at), parse_count(t[1], at)});
    } else if (key == "sdr_row") {
      std::vector<double> row;
      for (const auto& t : split_ws(value)) row.push_back(parse_real(t, at));
      rows.push_back(std::move(row));
    } else if (key == "source") {
      const auto t = split_ws(value);
      if (t.size() != 8) throw FormatError(at + ": expected 8 columns, got " + std::to_string(t.size()));
      SourceRecord s;
      if (t[0] != "-") s.reference_index = parse_count(t[0], at);
      if (t[1] != "-") s.reference_label = ClassLabel::parse(t[1]);
      if (t[2] != "-") s.estimate_index = parse_count(t[2], at);
      if (t[3] != "-") s.estimate_label = ClassLabel::parse(t[3]);
      s.tag = parse_tag(t[4]);
      if (t[5] != "-") s.raw_sdr_db = parse_real(t[5], at);
      s.penalty_db = parse_real(t[6], at);
      s.contribution_db = parse_real(t[7], at);
      report.per_source.push_back(s);
    } else {
      throw FormatError(at + ": unknown field");
    }
  });

  if (total) {
    Assignment a;
    a.pairs = std::move(pairs);
    a.total_sdr = *total;
    if (!rows.empty()) {
      a.sdr_matrix = SdrMatrix(rows.size(), rows.front().size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size()) throw FormatError("field 'sdr_row': ragged SDR matrix");
        for (std::size_t c = 0; c < rows[r].size(); ++c) a.sdr_matrix.at(r, c) = rows[r][c];
      }
    }
    report.assignment = std::move(a);
  }
  return report;
}

}  // namespace casa
