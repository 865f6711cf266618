#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "discordlab/analysis.hpp"
#include "discordlab/discord.hpp"
#include "discordlab/measure.hpp"
#include "discordlab/qmat.hpp"
#include "discordlab/tomo.hpp"

namespace discordlab {

using Json = nlohmann::ordered_json;

/// Reproducibility block embedded in every output artifact.
struct RunMeta {
  std::uint64_t seed = 0;
  std::int64_t n_total = 0;
  int n_mc = 0;
};

const char* version();

Json to_json(const RunMeta& meta);

/// {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
Json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

/// {"labels": [...], "counts": [...], "n_total": n, "seed": s | null}
Json to_json(const CountRecord& counts);
CountRecord counts_from_json(const Json& j);

Json to_json(const MeasurementAxis& axis);
Json to_json(const DiscordEstimate& e);
Json to_json(const UncertainValue& u);
Json diagnostics_json(const ReconstructionResult& r);

/// Parses a file; malformed content raises cli.BadInput.
Json read_json_file(const std::filesystem::path& path);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

/// Shortest decimal with 6 significant digits.
std::string format_sig6(double v);

/// A header line plus rows, rendered as CSV with a leading "# key=value"
/// metadata comment.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(const RunMeta& meta) const;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace discordlab
