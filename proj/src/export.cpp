#include "kerrtda/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kerrtda/errors.hpp"
#include "kerrtda/format.hpp"

namespace kerrtda {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw std::invalid_argument("expected CSV header '" + header + "', got '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line, ','));
    }
    return rows;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Linear ramp from dark blue to yellow.
std::string ramp_colour(double u) {
    u = std::clamp(u, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(68 + u * (253 - 68)));
    const int g = static_cast<int>(std::lround(1 + u * (231 - 1)));
    const int b = static_cast<int>(std::lround(84 + u * (37 - 84)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << v;
    return out.str();
}

}  // namespace

std::string grid_csv(const PhaseDiagramGrid& grid) {
    std::ostringstream out;
    out << "A,T,L_avg,status\n";
    for (const auto& cell : grid.cells) {
        out << format_double(cell.amplitude) << ',' << format_double(cell.period) << ','
            << (cell.l_avg ? format_double(*cell.l_avg) : std::string{}) << ',' << to_string(cell.status)
            << '\n';
    }
    return out.str();
}

std::string diagram_csv(const PersistenceDiagram& diagram) {
    std::ostringstream out;
    out << "dim,birth,death\n";
    for (const auto& f : diagram.features) {
        out << f.dim << ',' << format_double(f.birth) << ',' << format_double(f.death) << '\n';
    }
    return out.str();
}

std::string series_csv(const TimeSeries& series) {
    std::ostringstream out;
    out << "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_double(series.time_at(i)) << ',' << format_double(series.values[i]) << '\n';
    }
    return out.str();
}

std::string robustness_csv(const std::vector<RobustnessRow>& rows) {
    std::ostringstream out;
    out << "parameter,tau,dim,regular_mean,regular_std,chaotic_mean,chaotic_std,regular_count,chaotic_count\n";
    for (const auto& r : rows) {
        out << r.parameter << ',' << r.tau << ',' << r.dim << ',' << format_double(r.regular_mean) << ','
            << format_double(r.regular_std) << ',' << format_double(r.chaotic_mean) << ','
            << format_double(r.chaotic_std) << ',' << r.regular_count << ',' << r.chaotic_count << '\n';
    }
    return out.str();
}

PhaseDiagramGrid parse_grid_csv(const std::string& text) {
    PhaseDiagramGrid grid;
    for (const auto& row : csv_rows(text, "A,T,L_avg,status")) {
        if (row.size() != 4) throw std::invalid_argument("grid CSV rows need 4 fields");
        CellResult cell;
        cell.amplitude = parse_number(row[0]);
        cell.period = parse_number(row[1]);
        if (!row[2].empty()) cell.l_avg = parse_number(row[2]);
        cell.status = parse_cell_status(row[3]);
        if (std::find(grid.amplitudes.begin(), grid.amplitudes.end(), cell.amplitude) == grid.amplitudes.end()) {
            grid.amplitudes.push_back(cell.amplitude);
        }
        if (std::find(grid.periods.begin(), grid.periods.end(), cell.period) == grid.periods.end()) {
            grid.periods.push_back(cell.period);
        }
        grid.cells.push_back(std::move(cell));
    }
    if (grid.cells.size() != grid.amplitudes.size() * grid.periods.size()) {
        throw std::invalid_argument("grid CSV is not a full A×T grid");
    }
    return grid;
}

PersistenceDiagram parse_diagram_csv(const std::string& text) {
    PersistenceDiagram d;
    for (const auto& row : csv_rows(text, "dim,birth,death")) {
        if (row.size() != 3) throw std::invalid_argument("diagram CSV rows need 3 fields");
        d.features.push_back({static_cast<int>(parse_number(row[0])), parse_number(row[1]), parse_number(row[2])});
    }
    return d;
}

TimeSeries parse_series_csv(const std::string& text) {
    TimeSeries s;
    std::vector<double> times;
    for (const auto& row : csv_rows(text, "t,value")) {
        if (row.size() != 2) throw std::invalid_argument("series CSV rows need 2 fields");
        times.push_back(parse_number(row[0]));
        s.values.push_back(parse_number(row[1]));
    }
    if (!times.empty()) s.t0 = times.front();
    if (times.size() > 1) s.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    return s;
}

std::string heatmap_svg(const PhaseDiagramGrid& grid, const std::string& title) {
    constexpr double kCell = 24.0, kLeft = 60.0, kTop = 40.0, kBottom = 50.0, kRight = 20.0;
    const std::size_t na = grid.amplitudes.size();
    const std::size_t nt = grid.periods.size();
    const double width = kLeft + kRight + kCell * static_cast<double>(std::max<std::size_t>(na, 1));
    const double height = kTop + kBottom + kCell * static_cast<double>(std::max<std::size_t>(nt, 1));

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& c : grid.cells) {
        if (!c.l_avg) continue;
        lo = std::min(lo, *c.l_avg);
        hi = std::max(hi, *c.l_avg);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
        << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n";
    out << "  <text x=\"" << fixed(kLeft) << "\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ia = 0; ia < na; ++ia) {
            const auto& cell = grid.at(it, ia);
            const double x = kLeft + kCell * static_cast<double>(ia);
            // T grows upward.
            const double y = kTop + kCell * static_cast<double>(nt - 1 - it);
            const std::string fill = cell.l_avg ? ramp_colour((*cell.l_avg - lo) / span) : "#bbbbbb";
            out << "  <rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(kCell)
                << "\" height=\"" << fixed(kCell) << "\" fill=\"" << fill << "\"><title>A="
                << format_double(cell.amplitude) << " T=" << format_double(cell.period) << " L_avg="
                << (cell.l_avg ? format_double(*cell.l_avg) : to_string(cell.status)) << "</title></rect>\n";
        }
    }
    const double plot_bottom = kTop + kCell * static_cast<double>(nt);
    const double plot_right = kLeft + kCell * static_cast<double>(na);
    out << "  <line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(plot_bottom) << "\" x2=\"" << fixed(plot_right)
        << "\" y2=\"" << fixed(plot_bottom) << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
        << "\" y2=\"" << fixed(plot_bottom) << "\" stroke=\"black\"/>\n";
    if (na > 0) {
        out << "  <text x=\"" << fixed(kLeft) << "\" y=\"" << fixed(plot_bottom + 16) << "\" font-size=\"10\">"
            << format_double(grid.amplitudes.front()) << "</text>\n";
        out << "  <text x=\"" << fixed(plot_right - 20) << "\" y=\"" << fixed(plot_bottom + 16)
            << "\" font-size=\"10\">" << format_double(grid.amplitudes.back()) << "</text>\n";
    }
    if (nt > 0) {
        out << "  <text x=\"4\" y=\"" << fixed(plot_bottom) << "\" font-size=\"10\">"
            << format_double(grid.periods.front()) << "</text>\n";
        out << "  <text x=\"4\" y=\"" << fixed(kTop + 10) << "\" font-size=\"10\">"
            << format_double(grid.periods.back()) << "</text>\n";
    }
    out << "  <text x=\"" << fixed(0.5 * (kLeft + plot_right)) << "\" y=\"" << fixed(height - 8)
        << "\" font-size=\"12\">A</text>\n";
    out << "  <text x=\"20\" y=\"" << fixed(0.5 * (kTop + plot_bottom)) << "\" font-size=\"12\">T</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string diagram_svg(const PersistenceDiagram& diagram, const std::string& title) {
    constexpr double kSize = 320.0, kMargin = 40.0;
    double top = 0.0;
    for (const auto& f : diagram.features) {
        if (!f.essential()) top = std::max(top, f.death);
        top = std::max(top, f.birth);
    }
    if (top <= 0.0) top = 1.0;
    const double scale = kSize / (1.1 * top);
    const double origin_y = kMargin + kSize;
    const double inf_y = kMargin - 12.0;
    auto px = [&](double v) { return kMargin + v * scale; };
    auto py = [&](double v) { return origin_y - v * scale; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kSize + 2 * kMargin) << "\" height=\""
        << fixed(kSize + 2 * kMargin) << "\">\n";
    out << "  <text x=\"" << fixed(kMargin) << "\" y=\"14\" font-size=\"12\">" << xml_escape(title) << "</text>\n";
    out << "  <line x1=\"" << fixed(px(0)) << "\" y1=\"" << fixed(py(0)) << "\" x2=\"" << fixed(px(1.1 * top))
        << "\" y2=\"" << fixed(py(1.1 * top)) << "\" stroke=\"gray\" class=\"diagonal\"/>\n";
    out << "  <line x1=\"" << fixed(px(0)) << "\" y1=\"" << fixed(inf_y) << "\" x2=\"" << fixed(px(1.1 * top))
        << "\" y2=\"" << fixed(inf_y) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\" class=\"essential\"/>\n";
    for (const auto& f : diagram.features) {
        const double y = f.essential() ? inf_y : py(f.death);
        out << "  <circle cx=\"" << fixed(px(f.birth)) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\""
            << (f.dim == 0 ? "#1f77b4" : "#ff7f0e") << "\"/>\n";
    }
    out << "  <text x=\"" << fixed(kMargin + kSize / 2) << "\" y=\"" << fixed(kSize + 2 * kMargin - 8)
        << "\" font-size=\"12\">birth</text>\n";
    out << "  <text x=\"4\" y=\"" << fixed(kMargin + kSize / 2) << "\" font-size=\"12\">death</text>\n";
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string cell_label(std::size_t period_index, std::size_t amplitude_index) {
    return "A" + std::to_string(amplitude_index) + "_T" + std::to_string(period_index);
}

std::vector<std::filesystem::path> export_artifacts(const ArtifactBundle& bundle,
                                                    const std::filesystem::path& out_dir,
                                                    ExportFormats formats) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = out_dir / name;
        write_text_file(path, text);
        written.push_back(path);
    };
    const std::string& tag = bundle.tag;

    if (bundle.grid) {
        if (formats.csv) emit("grid_" + tag + ".csv", grid_csv(*bundle.grid));
        if (formats.svg) emit("grid_" + tag + ".svg", heatmap_svg(*bundle.grid));
    }
    for (const auto& [label, diagram] : bundle.diagrams) {
        if (formats.csv) emit("diagram_" + tag + "_" + label + ".csv", diagram_csv(diagram));
        if (formats.svg) emit("diagram_" + tag + "_" + label + ".svg", diagram_svg(diagram, label));
    }
    for (const auto& [label, series] : bundle.series) {
        if (formats.csv) emit("series_" + tag + "_" + label + ".csv", series_csv(series));
    }
    if (!bundle.robustness.empty() && formats.csv) {
        emit("robustness_" + tag + ".csv", robustness_csv(bundle.robustness));
    }

    std::ostringstream manifest;
    for (const auto& p : written) manifest << p.filename().string() << '\n';
    emit("manifest_" + tag + ".txt", manifest.str());
    return written;
}

}  // namespace kerrtda
