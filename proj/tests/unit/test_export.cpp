#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "kerrtda/errors.hpp"
#include "kerrtda/export.hpp"
#include "kerrtda/format.hpp"

using namespace kerrtda;
namespace fs = std::filesystem;

namespace {

// Minimal XML well-formedness check for the SVG subset we emit: every start
// tag is closed in LIFO order, self-closing tags balance themselves, and the
// declaration / comments are skipped. Returns the number of elements named
// `count_tag`, or -1 if the document is malformed.
long xml_element_count(const std::string& doc, const std::string& count_tag) {
    std::vector<std::string> stack;
    long count = 0;
    bool saw_root = false;
    std::size_t pos = 0;
    while ((pos = doc.find('<', pos)) != std::string::npos) {
        const std::size_t end = doc.find('>', pos);
        if (end == std::string::npos) return -1;
        std::string tag = doc.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return -1;
        if (tag.front() == '?' || tag.rfind("!--", 0) == 0) continue;
        if (tag.front() == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return -1;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        const std::string name = tag.substr(0, tag.find_first_of(" /"));
        if (stack.empty()) {
            if (saw_root) return -1;
            saw_root = true;
        }
        if (name == count_tag) ++count;
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty() && saw_root ? count : -1;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

PhaseDiagramGrid small_grid() {
    PhaseDiagramGrid grid;
    grid.amplitudes = {1.0, 2.0, 3.0};
    grid.periods = {8.0, 16.0};
    for (std::size_t it = 0; it < 2; ++it) {
        for (std::size_t ia = 0; ia < 3; ++ia) {
            CellResult c;
            c.amplitude = grid.amplitudes[ia];
            c.period = grid.periods[it];
            c.l_avg = 0.1 * static_cast<double>(it * 3 + ia) + 1.0 / 3.0;
            grid.cells.push_back(c);
        }
    }
    grid.cells[4].status = CellStatus::truncation_breach;
    grid.cells[4].l_avg.reset();
    return grid;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kerrtda_test_export_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("format_double round-trips and keeps integral values readable") {
    CHECK(format_double(1.0) == "1.0");
    CHECK(format_double(std::sqrt(2.0)) == "1.4142135623730951");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-3.0) == "-3.0");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    for (double v : {1.0 / 3.0, 6.02214076e23, 5e-324, -2.5e-7, 123456789.125}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("diagram CSV uses the dim,birth,death header and round-trip numbers") {
    PersistenceDiagram d;
    d.features.push_back({1, 1.0, std::sqrt(2.0)});
    d.features.push_back({0, 0.0});
    const std::string csv = diagram_csv(d);
    CHECK(csv == "dim,birth,death\n1,1.0,1.4142135623730951\n0,0.0,inf\n");
    CHECK(parse_diagram_csv(csv).canonical().features == d.canonical().features);
}

TEST_CASE("grid CSV: header, T-major rows, flagged cells carry no value") {
    CHECK(grid_csv(PhaseDiagramGrid{}) == "A,T,L_avg,status\n");

    const auto grid = small_grid();
    const std::string csv = grid_csv(grid);
    CHECK(csv.rfind("A,T,L_avg,status\n1.0,8.0,0.3333333333333333,ok\n", 0) == 0);
    CHECK(csv.find("2.0,16.0,,truncation-breach\n") != std::string::npos);
    CHECK(count_lines(csv) == 1 + grid.cells.size());

    const auto back = parse_grid_csv(csv);
    CHECK(back.amplitudes == grid.amplitudes);
    CHECK(back.periods == grid.periods);
    REQUIRE(back.cells.size() == grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        CHECK(back.cells[i].status == grid.cells[i].status);
        CHECK(back.cells[i].l_avg == grid.cells[i].l_avg);
    }
}

TEST_CASE("series CSV round-trips") {
    TimeSeries s{100.0, 0.4, {0.0, -1.5, 1.0 / 7.0}};
    const std::string csv = series_csv(s);
    CHECK(csv.rfind("t,value\n100.0,0.0\n", 0) == 0);
    const auto back = parse_series_csv(csv);
    CHECK(back.values == s.values);
    CHECK(back.t0 == s.t0);
    CHECK(back.dt == doctest::Approx(s.dt).epsilon(1e-12));
}

TEST_CASE("parsers reject malformed input") {
    CHECK_THROWS_AS(parse_diagram_csv("dim,birth\n1,0.0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_diagram_csv("dim,birth,death\n1,abc,2.0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_series_csv(""), std::invalid_argument);
    // 2×2 axes but only three cells
    CHECK_THROWS_AS(parse_grid_csv("A,T,L_avg,status\n1.0,1.0,0.5,ok\n2.0,1.0,0.5,ok\n1.0,2.0,0.5,ok\n"),
                    std::invalid_argument);
}

TEST_CASE("heatmap SVG is well-formed with one rect per cell") {
    const auto grid = small_grid();
    const std::string svg = heatmap_svg(grid);
    CHECK(xml_element_count(svg, "rect") == static_cast<long>(grid.cells.size()));
    CHECK(svg.find("#bbbbbb") != std::string::npos);  // the flagged cell
    CHECK(svg.find(">A<") != std::string::npos);
    CHECK(svg.find(">T<") != std::string::npos);

    CHECK(xml_element_count(heatmap_svg(PhaseDiagramGrid{}), "rect") == 0);
    CHECK(xml_element_count(heatmap_svg(grid, "a < b & c"), "rect") == 6);
}

TEST_CASE("diagram SVG is well-formed, draws the diagonal and one marker per feature") {
    PersistenceDiagram d;
    d.features = {{0, 0.0, 0.5}, {0, 0.0}, {1, 1.0, std::sqrt(2.0)}, {1, 0.25, 0.75}};
    const std::string svg = diagram_svg(d);
    CHECK(xml_element_count(svg, "circle") == 4);
    CHECK(xml_element_count(svg, "line") >= 1);
    CHECK(svg.find("class=\"diagonal\"") != std::string::npos);
    CHECK(xml_element_count(diagram_svg(PersistenceDiagram{}), "circle") == 0);
}

TEST_CASE("export_artifacts writes deterministic, byte-identical files") {
    ArtifactBundle bundle;
    bundle.tag = "0123456789abcdef";
    bundle.grid = small_grid();
    PersistenceDiagram d;
    d.features = {{1, 1.0, std::sqrt(2.0)}};
    bundle.diagrams.emplace_back(cell_label(1, 2), d);
    bundle.series.emplace_back("x", TimeSeries{0.0, 0.5, {1.0, 2.0}});

    const fs::path a = scratch_dir("a");
    const fs::path b = scratch_dir("b");
    const auto written_a = export_artifacts(bundle, a);
    const auto written_b = export_artifacts(bundle, b);
    REQUIRE(written_a.size() == written_b.size());
    CHECK(written_a.back().filename() == "manifest_0123456789abcdef.txt");
    CHECK(fs::exists(a / "grid_0123456789abcdef.csv"));
    CHECK(fs::exists(a / "grid_0123456789abcdef.svg"));
    CHECK(fs::exists(a / "diagram_0123456789abcdef_A2_T1.csv"));
    CHECK(fs::exists(a / "series_0123456789abcdef_x.csv"));
    for (std::size_t i = 0; i < written_a.size(); ++i) {
        CHECK(written_a[i].filename() == written_b[i].filename());
        CHECK(read_text_file(written_a[i]) == read_text_file(written_b[i]));
    }

    const fs::path c = scratch_dir("c");
    const auto csv_only = export_artifacts(bundle, c, {true, false});
    for (const auto& p : csv_only) CHECK(p.extension() != ".svg");
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("I/O errors name the offending path") {
    const fs::path blocker = scratch_dir("blocker");
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker.string()) << "not a directory";
    ArtifactBundle bundle;
    bundle.tag = "t";
    bundle.series.emplace_back("x", TimeSeries{0.0, 1.0, {1.0}});
    try {
        export_artifacts(bundle, blocker / "sub");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
    }
    CHECK_THROWS_AS(read_text_file(blocker / "missing.csv"), IoError);
    fs::remove(blocker);
}

#ifdef KERRTDA_CLI_PATH
namespace {
int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + KERRTDA_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
}  // namespace

TEST_CASE("CLI exit codes: 0 on success, 1 on config errors") {
    const fs::path out = scratch_dir("cli");
    CHECK(run_cli("classical-sim -A 1 -T 8 --set end_periods=110 --out " + out.string()) == 0);
    CHECK(run_cli("classical-sim --set no_such_key=1 --out " + out.string()) == 1);
    CHECK(run_cli("classical-sim --preset huge --out " + out.string()) == 1);
    CHECK(run_cli("classical-sim --config " + (out / "missing.cfg").string()) == 1);
    CHECK(run_cli("sweep --mode nonsense") == 1);
    CHECK(run_cli("no-such-command") == 1);
    fs::remove_all(out);
}

TEST_CASE("CLI sweep is byte-reproducible and exits 2 when cells are flagged") {
    const fs::path a = scratch_dir("sweep_a");
    const fs::path b = scratch_dir("sweep_b");
    const std::string grid =
        " --set a_count=2 --set t_count=1 --set t_min=8 --set t_max=8"
        " --set transient_periods=20 --set end_periods=60 --no-svg --out ";
    REQUIRE(run_cli("sweep" + grid + a.string()) == 0);
    REQUIRE(run_cli("sweep" + grid + b.string()) == 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        CHECK(read_text_file(entry.path()) == read_text_file(b / entry.path().filename()));
    }
    CHECK(files >= 2);

    // The conjugate form diverges for A > 0: every cell is flagged.
    const fs::path c = scratch_dir("sweep_c");
    CHECK(run_cli("sweep" + grid + c.string() + " --set nonlinear_conjugate=on") == 2);
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}
#endif
