#pragma once

#include <map>
#include <string>
#include <vector>

#include "critnet/checks.hpp"
#include "critnet/criticality.hpp"
#include "critnet/currents.hpp"
#include "critnet/density.hpp"
#include "critnet/net.hpp"

namespace critnet {

/// Net interchange format: a JSON object with `dimension`, `vertices`
/// (id / pos / leaf) and `edges` (id pairs), floats at 17 significant digits
/// so positions round-trip exactly.
std::string write_net_string(const Net& net);
void write_net_file(const Net& net, const std::string& path);
Net read_net_string(const std::string& text);
Net read_net_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Key=value comment lines put at the top of CSV outputs so a run can be
/// replayed from its artifacts.
using CsvHeader = std::vector<std::pair<std::string, std::string>>;

std::string trace_csv(const std::vector<TraceRow>& trace, const CsvHeader& header = {});
std::string cut_scan_csv(const CutScan& scan, const CsvHeader& header = {});
std::string density_csv(const DensityProfile& profile, const CsvHeader& header = {});
std::string rects_csv(const Net& net, const RectanglePacking& pack,
                      const CsvHeader& header = {});
std::string rects_svg(const Net& net, const RectanglePacking& pack);
std::string suite_csv(const SuiteReport& suite, const CsvHeader& header = {});
std::string suite_json(const SuiteReport& suite, const CsvHeader& header = {});

std::string check_status_name(CheckStatus status);

}  // namespace critnet
