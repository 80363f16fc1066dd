#include "critnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace critnet {

namespace {

std::string fmt(double x) { return format_double(x); }

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

void emit_header(std::ostringstream& os, const CsvHeader& header) {
  for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
}

}  // namespace

std::string write_net_string(const Net& net) {
  std::ostringstream os;
  os << "{\n  \"dimension\": " << net.dimension() << ",\n  \"vertices\": [\n";
  for (int v = 0; v < net.vertex_count(); ++v) {
    os << "    {\"id\": \"" << json_escape(net.id(v)) << "\", \"pos\": [";
    for (int i = 0; i < net.dimension(); ++i) {
      if (i) os << ", ";
      os << fmt(net.position(v)[i]);
    }
    os << "], \"leaf\": " << (net.is_leaf(v) ? "true" : "false") << "}";
    os << (v + 1 < net.vertex_count() ? ",\n" : "\n");
  }
  os << "  ],\n  \"edges\": [\n";
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const auto& e = net.edges()[i];
    os << "    [\"" << json_escape(net.id(e[0])) << "\", \"" << json_escape(net.id(e[1]))
       << "\"]" << (i + 1 < net.edges().size() ? ",\n" : "\n");
  }
  os << "  ],\n  \"center\": [";
  for (int i = 0; i < net.dimension(); ++i) {
    if (i) os << ", ";
    os << fmt(net.center()[i]);
  }
  os << "]\n}\n";
  return os.str();
}

void write_net_file(const Net& net, const std::string& path) {
  write_text_file(path, write_net_string(net));
}

Net read_net_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("net file is not valid JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dimension").get<int>();
    std::vector<VertexSpec> verts;
    for (const auto& jv : j.at("vertices")) {
      VertexSpec spec;
      spec.id = jv.at("id").get<std::string>();
      const auto& pos = jv.at("pos");
      Vector p(pos.size());
      for (std::size_t i = 0; i < pos.size(); ++i) p[i] = pos[i].get<double>();
      spec.pos = std::move(p);
      if (jv.contains("leaf")) spec.leaf = jv.at("leaf").get<bool>();
      verts.push_back(std::move(spec));
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& je : j.at("edges")) {
      if (je.size() != 2) throw ValidationError("edge entries must be id pairs");
      edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
    }
    std::optional<Vector> center;
    if (j.contains("center")) {
      const auto& jc = j.at("center");
      Vector c(jc.size());
      for (std::size_t i = 0; i < jc.size(); ++i) c[i] = jc[i].get<double>();
      center = std::move(c);
    }
    return Net::build(dim, std::move(verts), edges, std::move(center));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed net file: ") + e.what());
  }
}

Net read_net_file(const std::string& path) { return read_net_string(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trace_csv(const std::vector<TraceRow>& trace, const CsvHeader& header) {
  std::ostringstream os;
  emit_header(os, header);
  os << "sweep,total_length,max_residual\n";
  for (const auto& row : trace)
    os << row.sweep << "," << fmt(row.total_length) << "," << fmt(row.max_residual)
       << "\n";
  return os.str();
}

std::string cut_scan_csv(const CutScan& scan, const CsvHeader& header) {
  std::ostringstream os;
  emit_header(os, header);
  os << "lambda_low,lambda_high,current,boundary_kind\n";
  for (const auto& slab : scan.slabs) {
    const std::string kind = std::isinf(slab.lo)   ? "-inf"
                             : slab.lower_is_leaf ? "leaf"
                                                  : "interior";
    os << (std::isinf(slab.lo) ? "-inf" : fmt(slab.lo)) << ","
       << (std::isinf(slab.hi) ? "inf" : fmt(slab.hi)) << "," << fmt(slab.current)
       << "," << kind << "\n";
  }
  return os.str();
}

std::string density_csv(const DensityProfile& profile, const CsvHeader& header) {
  std::ostringstream os;
  emit_header(os, header);
  os << "r,lambda,dlambda_formula,dlambda_fd,n_anchors,rejected_flag\n";
  for (const auto& s : profile.samples) {
    os << fmt(s.r) << ",";
    if (s.valid) {
      os << fmt(s.lambda) << ",";
      os << (s.derivative_valid ? fmt(s.dlambda_formula) : "nan") << ",";
      os << (s.fd_valid ? fmt(s.dlambda_fd) : "nan") << ",";
      os << s.anchor_count << ",0\n";
    } else {
      os << "nan,nan,nan,0,1\n";
    }
  }
  return os.str();
}

std::string rects_csv(const Net& net, const RectanglePacking& pack,
                      const CsvHeader& header) {
  std::ostringstream os;
  emit_header(os, header);
  os << "# c_in=" << fmt(pack.c_in) << "\n# spread=" << fmt(pack.spread)
     << "\n# area_sum=" << fmt(pack.area_sum) << "\n# bound=" << fmt(pack.bound) << "\n";
  os << "edge,width,height,pot_lo,pot_hi,x_offset\n";
  for (const auto& r : pack.rects) {
    const auto& e = net.edges()[r.edge_index];
    os << net.id(e[0]) << "~" << net.id(e[1]) << "," << fmt(r.width) << ","
       << fmt(r.height) << "," << fmt(r.pot_lo) << "," << fmt(r.pot_hi) << ","
       << fmt(r.x_offset) << "\n";
  }
  return os.str();
}

std::string rects_svg(const Net& net, const RectanglePacking& pack) {
  // Box: width c_in, height spread; y grows upward in potential, downward in
  // SVG, so rows are flipped. Layout is presentational; areas are exact.
  double pot_min = 0.0;
  if (!pack.rects.empty()) {
    pot_min = pack.rects.front().pot_lo;
    for (const auto& r : pack.rects) pot_min = std::min(pot_min, r.pot_lo);
  }
  const double w = std::max(pack.c_in, 1e-9);
  const double h = std::max(pack.spread, 1e-9);
  const double px = 480.0;
  const double scale = px / std::max(w, h);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(w * scale + 2)
     << " " << fmt(h * scale + 2) << "\">\n";
  os << "  <rect x=\"1\" y=\"1\" width=\"" << fmt(w * scale) << "\" height=\""
     << fmt(h * scale)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  static const char* palette[] = {"#7eb26d", "#eab839", "#6ed0e0", "#ef843c",
                                  "#e24d42", "#1f78c1", "#ba43a9", "#705da0"};
  int color = 0;
  for (const auto& r : pack.rects) {
    if (r.width <= 0.0 || r.height <= 0.0) continue;
    const auto& e = net.edges()[r.edge_index];
    const double x = 1.0 + r.x_offset * scale;
    const double y = 1.0 + (h - (r.pot_hi - pot_min)) * scale;
    os << "  <rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
       << fmt(r.width * scale) << "\" height=\"" << fmt(r.height * scale)
       << "\" fill=\"" << palette[color % 8]
       << "\" fill-opacity=\"0.6\" stroke=\"#333\" stroke-width=\"0.5\">\n"
       << "    <title>" << json_escape(net.id(e[0])) << "~" << json_escape(net.id(e[1]))
       << " area=" << fmt(r.width * r.height) << "</title>\n  </rect>\n";
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

std::string check_status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

std::string suite_csv(const SuiteReport& suite, const CsvHeader& header) {
  std::ostringstream os;
  emit_header(os, header);
  os << "check,status,measured,bound,residual,tolerance,detail\n";
  for (const auto& rep : suite.reports) {
    os << rep.id << "," << check_status_name(rep.status) << ",";
    if (rep.status == CheckStatus::Skipped) {
      os << ",,,,";
    } else {
      os << fmt(rep.measured) << "," << fmt(rep.bound) << "," << fmt(rep.residual) << ","
         << fmt(rep.tolerance) << ",";
    }
    std::string detail = rep.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    os << detail << "\n";
  }
  return os.str();
}

std::string suite_json(const SuiteReport& suite, const CsvHeader& header) {
  std::ostringstream os;
  os << "{\n  \"config\": {";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ", ";
    os << "\"" << json_escape(header[i].first) << "\": \""
       << json_escape(header[i].second) << "\"";
  }
  os << "},\n  \"passed\": " << suite.passed << ",\n  \"failed\": " << suite.failed
     << ",\n  \"skipped\": " << suite.skipped << ",\n  \"checks\": [\n";
  for (std::size_t i = 0; i < suite.reports.size(); ++i) {
    const auto& rep = suite.reports[i];
    os << "    {\"id\": \"" << rep.id << "\", \"status\": \""
       << check_status_name(rep.status) << "\"";
    if (rep.status != CheckStatus::Skipped) {
      os << ", \"measured\": " << fmt(rep.measured) << ", \"bound\": " << fmt(rep.bound)
         << ", \"residual\": " << fmt(rep.residual)
         << ", \"tolerance\": " << fmt(rep.tolerance);
    }
    if (!rep.detail.empty()) os << ", \"detail\": \"" << json_escape(rep.detail) << "\"";
    os << "}" << (i + 1 < suite.reports.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace critnet
