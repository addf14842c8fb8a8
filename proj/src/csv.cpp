#include "gtp/csv.hpp"

#include "gtp/analysis.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gtp {

namespace {

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size()) return v;
    } catch (const std::out_of_range&) {
        // subnormal or huge literal; strtod still gives the right value
        return std::strtod(cell.c_str(), nullptr);
    } catch (const std::exception&) {
    }
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + cell + "'");
}

}  // namespace

std::string format_double(double v)
{
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string trajectory_csv_header(std::size_t dim)
{
    if (dim == 1) return "n,x,xbar,bet,capital,log_capital,stat";
    std::string h = "n";
    for (std::size_t i = 1; i <= dim; ++i) h += ",x_" + std::to_string(i);
    for (std::size_t i = 1; i <= dim; ++i) h += ",xbar_" + std::to_string(i);
    h += ",xbar_norm";
    for (std::size_t i = 1; i <= dim; ++i) h += ",bet_" + std::to_string(i);
    return h + ",capital,log_capital,stat";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << trajectory_csv_header(traj.dim) << '\n';
    std::string line;
    for (std::size_t r = 0; r < traj.rows(); ++r) {
        const std::int64_t n = traj.n[r];
        line = std::to_string(n);
        const auto x = traj.x_at(r);
        const auto xbar = traj.xbar_at(r);
        const auto bet = traj.bet_at(r);
        for (double v : x) line += ',' + format_double(v);
        for (double v : xbar) line += ',' + format_double(v);
        if (traj.dim > 1) line += ',' + format_double(norm(xbar));
        for (double v : bet) line += ',' + format_double(v);
        line += ',' + format_double(traj.capital[r]);
        line += ',' + format_double(traj.log_capital[r]);
        line += ',';
        if (n >= 3) line += format_double(theorem_statistic(n, xbar));
        line += '\n';
        out << line;
    }
}

Trajectory read_trajectory_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    const auto header = split_row(line);
    // header = n + dim x + dim xbar (+ norm) + dim bet + capital, log_capital, stat
    std::size_t dim = 0;
    if (header.size() == 7)
        dim = 1;
    else if (header.size() >= 8 && (header.size() - 5) % 3 == 0)
        dim = (header.size() - 5) / 3;
    if (dim == 0 || line != trajectory_csv_header(dim)) throw std::runtime_error("csv: unrecognised header");

    Trajectory t;
    t.dim = dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": wrong column count");
        std::size_t c = 0;
        std::int64_t n = 0;
        const auto& ncell = cells[c++];
        const auto [ptr, ec] = std::from_chars(ncell.data(), ncell.data() + ncell.size(), n);
        if (ec != std::errc{} || ptr != ncell.data() + ncell.size())
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad round index");
        t.n.push_back(n);
        for (std::size_t i = 0; i < dim; ++i) t.x.push_back(parse_cell(cells[c++], lineno));
        for (std::size_t i = 0; i < dim; ++i) t.xbar.push_back(parse_cell(cells[c++], lineno));
        if (dim > 1) ++c;
        for (std::size_t i = 0; i < dim; ++i) t.bet.push_back(parse_cell(cells[c++], lineno));
        t.capital.push_back(parse_cell(cells[c++], lineno));
        t.log_capital.push_back(parse_cell(cells[c++], lineno));
    }
    if (!t.n.empty()) {
        t.horizon = t.n.back();
        t.record_every = t.n.size() > 1 ? t.n[1] - t.n[0] : 1;
    }
    return t;
}

}  // namespace gtp
