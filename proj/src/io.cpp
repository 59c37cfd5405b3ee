#include "lohe/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lohe::io {

namespace {

// Yields non-blank lines with comments stripped, tracking line numbers.
class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            tokens.clear();
            for (std::string tok; ss >> tok;) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

    double number(const std::string& tok) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
            fail("expected a finite decimal number, got '" + tok + "'");
        }
        return v;
    }

    long integer(const std::string& tok) const {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("expected an integer, got '" + tok + "'");
        return v;
    }

    std::vector<std::string> header(const std::string& keyword, std::size_t args) {
        std::vector<std::string> tokens;
        if (!next(tokens)) fail("missing '" + keyword + "' header line");
        if (tokens.front() != keyword || tokens.size() != args + 1) {
            fail("first line must be '" + keyword + "' followed by " + std::to_string(args) + " integer(s)");
        }
        return tokens;
    }

    const std::string& source() const noexcept { return source_; }

private:
    std::istream& in_;
    std::string source_;
    int line_no_ = 0;
};

std::ifstream open(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return f;
}

}  // namespace

Digraph parse_graph(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    const long m = reader.integer(reader.header("nodes", 1)[1]);
    if (m < 1) reader.fail("node count must be positive");

    Matrix a = Matrix::Zero(m, m);
    std::vector<std::string> tokens;
    while (reader.next(tokens)) {
        if (tokens.size() != 3) reader.fail("edge lines have the form 'j i w'");
        const long j = reader.integer(tokens[0]);
        const long i = reader.integer(tokens[1]);
        const double w = reader.number(tokens[2]);
        if (i < 1 || i > m || j < 1 || j > m) reader.fail("node label out of range 1.." + std::to_string(m));
        if (!(w > 0.0)) reader.fail("edge weight must be positive");
        if (i == j) continue;
        if (a(i - 1, j - 1) != 0.0) reader.fail("duplicate edge " + tokens[0] + " -> " + tokens[1]);
        a(i - 1, j - 1) = w;
    }
    return Digraph(std::move(a));
}

Digraph read_graph(const std::string& path) {
    auto f = open(path);
    return parse_graph(f, path);
}

void write_graph(std::ostream& out, const Digraph& g) {
    out << "nodes " << g.size() << '\n' << std::setprecision(17);
    for (Index i = 0; i < g.size(); ++i) {
        for (Index j = 0; j < g.size(); ++j) {
            if (g.weight(i, j) > 0.0) out << j + 1 << ' ' << i + 1 << ' ' << g.weight(i, j) << '\n';
        }
    }
}

StateMatrix parse_state(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    const auto head = reader.header("state", 2);
    const long m = reader.integer(head[1]);
    const long n = reader.integer(head[2]);
    if (m < 1 || n < 2) reader.fail("need m >= 1 and n >= 2");

    Matrix rows(m, n);
    std::vector<std::string> tokens;
    for (long i = 0; i < m; ++i) {
        if (!reader.next(tokens)) reader.fail("expected " + std::to_string(m) + " state rows");
        if (static_cast<long>(tokens.size()) != n) reader.fail("state row needs " + std::to_string(n) + " coordinates");
        for (long c = 0; c < n; ++c) rows(i, c) = reader.number(tokens[c]);
        if (rows.row(i).norm() < 1e-6) reader.fail("state row has norm below 1e-6");
    }
    if (reader.next(tokens)) reader.fail("unexpected trailing data");
    return StateMatrix::normalized(std::move(rows));
}

StateMatrix read_state(const std::string& path) {
    auto f = open(path);
    return parse_state(f, path);
}

Matrix parse_omega(std::istream& in, const std::string& source) {
    LineReader reader(in, source);
    const long n = reader.integer(reader.header("omega", 1)[1]);
    if (n < 2) reader.fail("omega dimension must be at least 2");
    Matrix w(n, n);
    std::vector<std::string> tokens;
    for (long i = 0; i < n; ++i) {
        if (!reader.next(tokens) || static_cast<long>(tokens.size()) != n) {
            reader.fail("expected " + std::to_string(n) + " rows of " + std::to_string(n) + " entries");
        }
        for (long c = 0; c < n; ++c) w(i, c) = reader.number(tokens[c]);
    }
    try {
        require_skew_symmetric(w);
    } catch (const NotSkewSymmetric& e) {
        reader.fail(e.what());
    }
    return w;
}

Matrix read_omega(const std::string& path) {
    auto f = open(path);
    return parse_omega(f, path);
}

void write_states_csv(std::ostream& out, const Trajectory& traj) {
    if (traj.size() == 0) return;
    const Index m = traj.states.front().m(), n = traj.states.front().n();
    out << 't';
    for (Index i = 1; i <= m; ++i) {
        for (Index c = 1; c <= n; ++c) out << ",r_" << i << '_' << c;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t p = 0; p < traj.size(); ++p) {
        out << traj.times[p];
        const Matrix& r = traj.states[p].matrix();
        for (Index i = 0; i < m; ++i) {
            for (Index c = 0; c < n; ++c) out << ',' << r(i, c);
        }
        out << '\n';
    }
}

Trajectory read_states_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
    Index m = 0, n = 0;
    {
        std::istringstream hs(line);
        std::string cell;
        std::getline(hs, cell, ',');
        if (cell != "t") throw ParseError(source, 1, "header must start with 't'");
        while (std::getline(hs, cell, ',')) {
            long i = 0, c = 0;
            if (std::sscanf(cell.c_str(), "r_%ld_%ld", &i, &c) != 2) {
                throw ParseError(source, 1, "bad column name '" + cell + "'");
            }
            m = std::max<Index>(m, i);
            n = std::max<Index>(n, c);
        }
    }
    if (m < 1 || n < 1) throw ParseError(source, 1, "no state columns");

    Trajectory traj;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ParseError(source, line_no, "bad number '" + cell + "'");
            }
            vals.push_back(v);
        }
        if (static_cast<Index>(vals.size()) != 1 + m * n) throw ParseError(source, line_no, "wrong column count");
        Matrix rows(m, n);
        for (Index i = 0; i < m; ++i) {
            for (Index c = 0; c < n; ++c) rows(i, c) = vals[1 + i * n + c];
        }
        traj.times.push_back(vals[0]);
        traj.states.emplace_back(std::move(rows));
    }
    return traj;
}

void write_errors_csv(std::ostream& out, const std::vector<double>& times, const std::vector<ErrorMatrix>& errors) {
    if (times.size() != errors.size()) throw DimensionMismatch("times and error samples differ in length");
    if (errors.empty()) return;
    const Index m = errors.front().size();
    out << 't';
    for (Index i = 1; i <= m; ++i) {
        for (Index j = i + 1; j <= m; ++j) out << ",e_" << i << '_' << j;
    }
    out << '\n' << std::setprecision(17);
    for (std::size_t p = 0; p < times.size(); ++p) {
        out << times[p];
        for (Index i = 0; i < m; ++i) {
            for (Index j = i + 1; j < m; ++j) out << ',' << errors[p](i, j);
        }
        out << '\n';
    }
}

void write_series_csv(std::ostream& out, const std::string& t_name, const std::string& v_name,
                      const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw DimensionMismatch("series lengths differ");
    out << t_name << ',' << v_name << '\n' << std::setprecision(17);
    for (std::size_t p = 0; p < times.size(); ++p) out << times[p] << ',' << values[p] << '\n';
}

}  // namespace lohe::io
