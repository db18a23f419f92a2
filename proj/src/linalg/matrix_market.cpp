#include "mgoc/linalg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mgoc/error.hpp"

namespace mgoc::linalg {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Header {
    std::string format;
    std::string field;
    std::string symmetry;
};

Header parse_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("MatrixMarket: empty input");
    std::istringstream hs(line);
    std::string banner, object;
    Header h;
    hs >> banner >> object >> h.format >> h.field >> h.symmetry;
    if (banner != "%%MatrixMarket")
        throw ParseError("MatrixMarket: missing '%%MatrixMarket' banner, got '" + line + "'");
    if (lower(object) != "matrix")
        throw ParseError("MatrixMarket: unsupported object '" + object + "'");
    h.format = lower(h.format);
    h.field = lower(h.field);
    h.symmetry = lower(h.symmetry);
    if (h.format.empty() || h.field.empty() || h.symmetry.empty())
        throw ParseError("MatrixMarket: incomplete header '" + line + "'");
    return h;
}

// Skips comment and blank lines, returns the next data line.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
    const Header h = parse_header(in);
    if (h.format != "coordinate")
        throw ParseError("MatrixMarket: expected coordinate format, got '" + h.format + "'");

    MatrixMarketData d;
    if (h.field == "real" || h.field == "double") d.field = MmField::Real;
    else if (h.field == "integer") d.field = MmField::Integer;
    else if (h.field == "pattern") d.field = MmField::Pattern;
    else throw ParseError("MatrixMarket: unsupported field '" + h.field + "'");

    if (h.symmetry == "general") d.symmetry = MmSymmetry::General;
    else if (h.symmetry == "symmetric") d.symmetry = MmSymmetry::Symmetric;
    else throw ParseError("MatrixMarket: unsupported symmetry '" + h.symmetry + "'");

    std::string line;
    std::size_t line_no = 1;
    if (!next_data_line(in, line, line_no)) throw ParseError("MatrixMarket: missing size line");
    long long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw ParseError("MatrixMarket: malformed size line " + std::to_string(line_no) +
                             ": '" + line + "'");
    }
    d.rows = rows;
    d.cols = cols;
    d.entries.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; ++k) {
        if (!next_data_line(in, line, line_no))
            throw ParseError("MatrixMarket: expected " + std::to_string(nnz) + " entries, found " +
                             std::to_string(k));
        std::istringstream ls(line);
        long long i = 0, j = 0;
        double v = 1.0;
        if (!(ls >> i >> j)) throw ParseError("MatrixMarket: malformed entry on line " +
                                              std::to_string(line_no) + ": '" + line + "'");
        if (d.field != MmField::Pattern && !(ls >> v))
            throw ParseError("MatrixMarket: missing value on line " + std::to_string(line_no));
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError("MatrixMarket: index (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") out of range on line " +
                             std::to_string(line_no));
        d.entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
    }
    return d;
}

MatrixMarketData read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("MatrixMarket: cannot open '" + path.string() + "'");
    return read_matrix_market(in);
}

std::vector<double> read_matrix_market_array(const std::filesystem::path& path, Index& rows,
                                             Index& cols) {
    std::ifstream in(path);
    if (!in) throw ParseError("MatrixMarket: cannot open '" + path.string() + "'");
    const Header h = parse_header(in);
    if (h.format != "array")
        throw ParseError("MatrixMarket: expected array format in '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 1;
    if (!next_data_line(in, line, line_no)) throw ParseError("MatrixMarket: missing size line");
    long long r = 0, c = 0;
    std::istringstream ls(line);
    if (!(ls >> r >> c) || r < 0 || c < 0) throw ParseError("MatrixMarket: malformed size line");
    rows = r;
    cols = c;
    // Array format is column-major.
    std::vector<double> out(static_cast<std::size_t>(r * c));
    for (long long j = 0; j < c; ++j) {
        for (long long i = 0; i < r; ++i) {
            if (!next_data_line(in, line, line_no))
                throw ParseError("MatrixMarket: truncated array in '" + path.string() + "'");
            std::istringstream vs(line);
            double v = 0.0;
            if (!(vs >> v)) throw ParseError("MatrixMarket: malformed value on line " +
                                             std::to_string(line_no));
            out[static_cast<std::size_t>(i * c + j)] = v;
        }
    }
    return out;
}

SparseMatrix to_sparse(const MatrixMarketData& data) {
    std::vector<Triplet> t = data.entries;
    if (data.symmetry == MmSymmetry::Symmetric) {
        for (const auto& e : data.entries)
            if (e.row != e.col) t.push_back({e.col, e.row, e.value});
    }
    return SparseMatrix::from_triplets(data.rows, data.cols, t);
}

SparseMatrix load_sparse_matrix(const std::filesystem::path& path) {
    return to_sparse(read_matrix_market(path));
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path,
                         const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "%%MatrixMarket matrix coordinate real general\n";
    if (!comment.empty()) out << "% " << comment << '\n';
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& e : a.triplets()) out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
}

}  // namespace mgoc::linalg
