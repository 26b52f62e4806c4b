#include "nlbv/pnm.hpp"

#include <cmath>
#include <fstream>
#include <vector>

namespace nlbv {

namespace {

// Skips whitespace and '#' comments, then reads one unsigned decimal token.
long read_token(std::istream& in, const char* what) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw MalformedHeader(what);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 30) throw MalformedHeader(what);
        c = in.get();
    }
    // leave the delimiter in the stream: binary readers skip exactly one
    if (c != EOF) in.unget();
    return value;
}

struct PnmHeader {
    char type;      // '1','2','4','5'
    int width, height;
    long maxval;    // 1 for bitmaps
};

PnmHeader read_header(std::istream& in, const std::string& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P') throw MalformedHeader(path + ": not a PNM file");
    if (magic[1] == '3' || magic[1] == '6')
        throw UnsupportedFormat(path + ": color PNM is not supported");
    if (magic[1] != '1' && magic[1] != '2' && magic[1] != '4' && magic[1] != '5')
        throw UnsupportedFormat(path + ": unknown PNM type");
    PnmHeader h;
    h.type = magic[1];
    h.width = int(read_token(in, "width"));
    h.height = int(read_token(in, "height"));
    h.maxval = (h.type == '2' || h.type == '5') ? read_token(in, "maxval") : 1;
    if (h.width < 1 || h.height < 1) throw MalformedHeader(path + ": empty image");
    if (h.maxval < 1 || h.maxval > 65535) throw MalformedHeader(path + ": maxval out of range");
    return h;
}

GridDomain image_grid(int width, int height, double spacing) {
    return height == 1 ? GridDomain::line(width, spacing)
                       : GridDomain::plane(width, height, spacing);
}

} // namespace

DiscreteFunction load_pgm(const std::string& path, double spacing) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedHeader(path + ": cannot open");
    PnmHeader h = read_header(in, path);
    if (h.type != '2' && h.type != '5') throw UnsupportedFormat(path + ": expected a PGM");
    GridDomain grid = image_grid(h.width, h.height, spacing);
    Eigen::ArrayXd values(grid.size());
    const std::int64_t count = grid.size();
    if (h.type == '2') {
        for (std::int64_t i = 0; i < count; ++i) {
            long v = read_token(in, "pixel");
            if (v > h.maxval) throw MalformedHeader(path + ": pixel above maxval");
            values[i] = double(v) / double(h.maxval);
        }
    } else {
        in.get(); // single whitespace byte after maxval
        const int bytes = h.maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(count * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), raw.size());
        if (!in) throw MalformedHeader(path + ": truncated pixel data");
        for (std::int64_t i = 0; i < count; ++i) {
            long v = bytes == 1 ? raw[i] : (long(raw[2 * i]) << 8) | raw[2 * i + 1];
            if (v > h.maxval) throw MalformedHeader(path + ": pixel above maxval");
            values[i] = double(v) / double(h.maxval);
        }
    }
    return DiscreteFunction(grid, std::move(values));
}

void save_pgm(const std::string& path, const DiscreteFunction& u, double lo, double hi,
              int maxval) {
    if (!(hi > lo)) throw BadRange("save_pgm needs lo < hi");
    if (maxval < 1 || maxval > 65535) throw BadRange("maxval out of range");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedHeader(path + ": cannot open for writing");
    const GridDomain& grid = u.grid();
    out << "P5\n" << grid.nx() << " " << grid.ny() << "\n" << maxval << "\n";
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(grid.size() * bytes);
    for (std::int64_t i = 0; i < grid.size(); ++i) {
        double t = (u[i] - lo) / (hi - lo);
        t = std::min(1.0, std::max(0.0, t));
        long v = std::lround(t * maxval);
        if (bytes == 1) raw[i] = static_cast<unsigned char>(v);
        else { raw[2 * i] = static_cast<unsigned char>(v >> 8); raw[2 * i + 1] = static_cast<unsigned char>(v & 255); }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
}

DiscreteSet load_pbm(const std::string& path, double spacing) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedHeader(path + ": cannot open");
    PnmHeader h = read_header(in, path);
    if (h.type != '1' && h.type != '4') throw UnsupportedFormat(path + ": expected a PBM");
    GridDomain grid = image_grid(h.width, h.height, spacing);
    DiscreteSet set(grid);
    if (h.type == '1') {
        for (std::int64_t i = 0; i < grid.size(); ++i) {
            long v = read_token(in, "bit");
            if (v > 1) throw MalformedHeader(path + ": bit above 1");
            set.set(int(i), v == 1);
        }
    } else {
        in.get();
        const int row_bytes = (h.width + 7) / 8;
        std::vector<unsigned char> raw(std::size_t(row_bytes) * h.height);
        in.read(reinterpret_cast<char*>(raw.data()), raw.size());
        if (!in) throw MalformedHeader(path + ": truncated bitmap data");
        for (int y = 0; y < h.height; ++y)
            for (int x = 0; x < h.width; ++x) {
                unsigned char byte = raw[std::size_t(y) * row_bytes + x / 8];
                bool bit = (byte >> (7 - x % 8)) & 1;
                set.set(grid.index(x, y), bit);
            }
    }
    return set;
}

void save_pbm(const std::string& path, const DiscreteSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedHeader(path + ": cannot open for writing");
    const GridDomain& grid = set.grid();
    out << "P4\n" << grid.nx() << " " << grid.ny() << "\n";
    const int row_bytes = (grid.nx() + 7) / 8;
    std::vector<unsigned char> raw(std::size_t(row_bytes) * grid.ny(), 0);
    for (int y = 0; y < grid.ny(); ++y)
        for (int x = 0; x < grid.nx(); ++x)
            if (set.test(grid.index(x, y)))
                raw[std::size_t(y) * row_bytes + x / 8] |= static_cast<unsigned char>(1 << (7 - x % 8));
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size());
}

WeightMeasure load_weight_pgm(const std::string& path, double w_lo, double w_hi, double spacing) {
    if (!(w_lo > 0.0) || !(w_hi >= w_lo)) throw InvalidParameter("weight range needs 0 < w_lo <= w_hi");
    DiscreteFunction f = load_pgm(path, spacing);
    Eigen::ArrayXd w = w_lo + (w_hi - w_lo) * f.values();
    return WeightMeasure(f.grid(), std::move(w));
}

} // namespace nlbv
