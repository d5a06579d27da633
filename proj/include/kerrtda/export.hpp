#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kerrtda/persistence.hpp"
#include "kerrtda/pipeline.hpp"
#include "kerrtda/time_series.hpp"

namespace kerrtda {

// CSV bodies. Numbers use format_double (shortest round-trip decimal).
std::string grid_csv(const PhaseDiagramGrid& grid);            // A,T,L_avg,status
std::string diagram_csv(const PersistenceDiagram& diagram);    // dim,birth,death
std::string series_csv(const TimeSeries& series);              // t,value
std::string robustness_csv(const std::vector<RobustnessRow>& rows);

PhaseDiagramGrid parse_grid_csv(const std::string& text);
PersistenceDiagram parse_diagram_csv(const std::string& text);
TimeSeries parse_series_csv(const std::string& text);

// Heatmap with one <rect> per grid cell (linear colour map, flagged cells
// grey), axes labelled A and T.
std::string heatmap_svg(const PhaseDiagramGrid& grid, const std::string& title = "L_avg (H1)");
// Scatter of finite features with the birth = death diagonal; essential
// features sit on a dashed line above the plot.
std::string diagram_svg(const PersistenceDiagram& diagram, const std::string& title = "persistence");

struct ExportFormats {
    bool csv = true;
    bool svg = true;
};

struct ArtifactBundle {
    std::string tag;  // usually config_hash(config)
    std::optional<PhaseDiagramGrid> grid;
    std::vector<std::pair<std::string, PersistenceDiagram>> diagrams;
    std::vector<std::pair<std::string, TimeSeries>> series;
    std::vector<RobustnessRow> robustness;
};

// Writes every artifact under out_dir with names derived from the tag and
// labels, followed by manifest_<tag>.txt. Returns the written paths in
// order (manifest last). Throws IoError naming the offending path.
std::vector<std::filesystem::path> export_artifacts(const ArtifactBundle& bundle,
                                                    const std::filesystem::path& out_dir,
                                                    ExportFormats formats = {});

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Per-cell diagram labels used by export: A<iA>_T<iT>.
std::string cell_label(std::size_t period_index, std::size_t amplitude_index);

}  // namespace kerrtda
