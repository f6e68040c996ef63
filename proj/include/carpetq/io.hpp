// Serialization: codebook documents as JSON with "p/q" rational strings
// (lossless round trips), plus the CSV report schemas.

#pragma once

#include <carpetq/asymptotics.hpp>
#include <carpetq/geometry.hpp>
#include <carpetq/optimal.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace carpetq {

using Json = nlohmann::json;

struct CodebookDocument {
  Int n;
  std::string provenance;  // constructed | lloyd | file
  std::optional<Decomposition> decomposition;
  std::vector<Pt> points;
};

inline CodebookDocument make_document(const Codebook& cb, std::string provenance,
                                      std::optional<Decomposition> decomposition = {}) {
  CodebookDocument doc;
  doc.n = Int(cb.size());
  doc.provenance = std::move(provenance);
  doc.decomposition = std::move(decomposition);
  doc.points = cb.points;
  return doc;
}

inline Json document_to_json(const CodebookDocument& doc) {
  Json j;
  j["n"] = doc.n.str();
  j["provenance"] = doc.provenance;
  if (doc.decomposition) {
    Json d;
    d["level"] = doc.decomposition->level;
    d["m"] = doc.decomposition->m;
    d["k"] = doc.decomposition->k.str();
    Json t = Json::array();
    for (const Word& w : doc.decomposition->t) t.push_back(w.str());
    d["t"] = t;
    j["decomposition"] = d;
  } else {
    j["decomposition"] = nullptr;
  }
  Json pts = Json::array();
  for (const Pt& p : doc.points)
    pts.push_back(Json::array({format_rational(p.x), format_rational(p.y)}));
  j["points"] = pts;
  return j;
}

inline CodebookDocument document_from_json(const Json& j) {
  CodebookDocument doc;
  doc.n = Int(j.at("n").get<std::string>());
  doc.provenance = j.at("provenance").get<std::string>();
  if (j.contains("decomposition") && !j.at("decomposition").is_null()) {
    const Json& d = j.at("decomposition");
    Decomposition dec;
    dec.n = doc.n;
    dec.level = d.at("level").get<unsigned>();
    dec.m = d.at("m").get<int>();
    dec.k = Int(d.at("k").get<std::string>());
    for (const auto& w : d.at("t")) dec.t.push_back(Word(w.get<std::string>()));
    doc.decomposition = std::move(dec);
  }
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("point entries must be [x, y] pairs");
    doc.points.push_back(
        Pt{parse_rational(p[0].get<std::string>()), parse_rational(p[1].get<std::string>())});
  }
  if (Int(doc.points.size()) != doc.n)
    throw std::invalid_argument("point count does not match n");
  return doc;
}

inline Codebook codebook_from_document(const CodebookDocument& doc) {
  Codebook cb{doc.points};
  validate_codebook(cb);
  return cb;
}

inline std::string decimal_string(const Rat& v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v.convert_to<double>());
  return buf;
}

inline std::string decimal_string(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// CSV schema: n,v_n,decimal
inline void write_error_csv(std::ostream& os, const std::vector<Int>& ns) {
  os << "n,v_n,decimal\n";
  for (const Int& n : ns) {
    Rat v = quantization_error(n);
    os << n << ',' << format_rational(v) << ',' << decimal_string(v) << '\n';
  }
}

// CSV schema: ell,n,x,v_n_num,v_n_den,scaled,g_or_h,f_paper
inline void write_profile_csv(std::ostream& os, const ProfileReport& report) {
  os << "ell,n,x,v_n_num,v_n_den,scaled,g_or_h,f_paper\n";
  for (const ScaledSample& s : report.samples) {
    os << s.level << ',' << s.n << ',' << decimal_string(s.x) << ','
       << boost::multiprecision::numerator(s.v_n) << ','
       << boost::multiprecision::denominator(s.v_n) << ',' << decimal_string(s.scaled) << ','
       << decimal_string(s.limit) << ',' << decimal_string(s.published) << '\n';
  }
}

// CSV schema: ell,estimate,beta,abs_gap
inline void write_dimension_csv(std::ostream& os, const std::vector<unsigned>& levels) {
  os << "ell,estimate,beta,abs_gap\n";
  double b = beta();
  for (unsigned level : levels) {
    double est = dimension_estimate(pow_int(4, level));
    os << level << ',' << decimal_string(est) << ',' << decimal_string(b) << ','
       << decimal_string(std::abs(b - est)) << '\n';
  }
}

}  // namespace carpetq
