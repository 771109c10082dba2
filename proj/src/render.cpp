#include "faultmaint/render.hpp"

#include "faultmaint/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace faultmaint {

namespace {

const char* fill_for(Action u) {
    switch (u) {
        case Action::DoNothing: return "#000000";
        case Action::Inspect: return "#8c8c8c";
        case Action::Repair: return "#ffffff";
    }
    return "#ff0000";
}

int tick_step(int count) {
    for (int step : {1, 2, 5, 10, 20, 25, 50, 100, 200, 500, 1000}) {
        if (count / step <= 12) return step;
    }
    return count / 10;
}

}  // namespace

std::string render_svg(const ActionGrid& grid) {
    if (grid.rows < 1 || grid.cols < 1 ||
        grid.cells.size() != static_cast<std::size_t>(grid.rows) * grid.cols) {
        throw ConfigError("render", "grid dimensions do not match its cells");
    }
    const int cell_w = std::clamp(800 / grid.cols, 4, 40);
    const int cell_h = std::clamp(400 / grid.rows, 12, 40);
    const int left = 60;
    const int top = 20;
    const int plot_w = cell_w * grid.cols;
    const int plot_h = cell_h * grid.rows;
    const int legend_y = top + plot_h + 50;
    const int width = std::max(left + plot_w + 20, 420);
    const int height = legend_y + 40;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#f4f4f4\"/>\n";

    svg << "<g shape-rendering=\"crispEdges\">\n";
    for (int s = 0; s < grid.rows; ++s) {
        const int y = top + (grid.rows - 1 - s) * cell_h;
        for (int z = 0; z < grid.cols; ++z) {
            svg << "<rect x=\"" << left + z * cell_w << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << fill_for(grid.at(s, z))
                << "\"/>\n";
        }
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#000000\"/>\n";

    const int z_step = tick_step(grid.cols - 1);
    for (int z = 0; z < grid.cols; z += z_step) {
        svg << "<text x=\"" << left + z * cell_w + cell_w / 2 << "\" y=\"" << top + plot_h + 16
            << "\" text-anchor=\"middle\">" << z << "</text>\n";
    }
    const int s_step = tick_step(grid.rows - 1);
    for (int s = 0; s < grid.rows; s += s_step) {
        svg << "<text x=\"" << left - 8 << "\" y=\"" << top + (grid.rows - 1 - s) * cell_h + cell_h / 2 + 4
            << "\" text-anchor=\"end\">" << s << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 34
        << "\" text-anchor=\"middle\">elapsed time since last observation (z)</text>\n";
    svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + plot_h / 2 << ")\">observed faults (s)</text>\n";

    int x = left;
    for (Action u : kAllActions) {
        svg << "<rect x=\"" << x << "\" y=\"" << legend_y << "\" width=\"14\" height=\"14\" fill=\""
            << fill_for(u) << "\" stroke=\"#000000\"/>\n";
        svg << "<text x=\"" << x + 20 << "\" y=\"" << legend_y + 12 << "\">" << to_string(u)
            << "</text>\n";
        x += 110;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_svg(const std::filesystem::path& path, const ActionGrid& grid) {
    const std::string text = render_svg(grid);
    std::ofstream out(path);
    if (!out) {
        throw ConfigError(path.string(), "cannot open for writing");
    }
    out << text;
}

}  // namespace faultmaint
