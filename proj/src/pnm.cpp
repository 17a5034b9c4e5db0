#include "pricetag/pnm.hpp"

#include <fstream>

namespace pricetag {

static void write_header(std::ofstream& f, const char* magic, int w, int h) {
    f << magic << "\n" << w << " " << h << "\n255\n";
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ImageError("cannot open for writing: " + path);
    write_header(f, "P5", img.width, img.height);
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!f) throw ImageError("write failed: " + path);
}

void save_pgm(const BinaryImage& img, const std::string& path) {
    GrayImage g(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i) g.pixels[i] = img.pixels[i] ? 0 : 255;
    save_pgm(g, path);
}

void save_ppm(const ColorImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ImageError("cannot open for writing: " + path);
    write_header(f, "P6", img.width, img.height);
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!f) throw ImageError("write failed: " + path);
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
static std::string next_token(std::istream& f) {
    std::string tok;
    int c;
    while ((c = f.get()) != EOF) {
        if (c == '#') {
            while ((c = f.get()) != EOF && c != '\n') {
            }
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = f.get()) != EOF && !std::isspace(c) && c != '#')
                tok.push_back(static_cast<char>(c));
            if (c == '#') f.putback('#');
            return tok;
        }
    }
    throw ImageError("unexpected end of PNM header");
}

static void read_dims(std::istream& f, int& w, int& h) {
    w = std::stoi(next_token(f));
    h = std::stoi(next_token(f));
    int maxval = std::stoi(next_token(f));
    if (w < 1 || h < 1) throw ImageError("invalid PNM dimensions");
    if (maxval != 255) throw ImageError("unsupported PNM maxval (expected 255)");
}

GrayImage load_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ImageError("cannot open: " + path);
    if (next_token(f) != "P5") throw ImageError("not a binary PGM: " + path);
    int w, h;
    read_dims(f, w, h);
    GrayImage img(w, h);
    f.read(reinterpret_cast<char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
    if (f.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw ImageError("truncated PGM: " + path);
    return img;
}

ColorImage load_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ImageError("cannot open: " + path);
    if (next_token(f) != "P6") throw ImageError("not a binary PPM: " + path);
    int w, h;
    read_dims(f, w, h);
    ColorImage img(w, h);
    f.read(reinterpret_cast<char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
    if (f.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw ImageError("truncated PPM: " + path);
    return img;
}

ColorImage load_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ImageError("cannot open: " + path);
    char magic[2] = {0, 0};
    f.read(magic, 2);
    f.close();
    if (magic[0] == 'P' && magic[1] == '6') return load_ppm(path);
    if (magic[0] == 'P' && magic[1] == '5') {
        GrayImage g = load_pgm(path);
        ColorImage c(g.width, g.height);
        for (size_t i = 0; i < g.pixels.size(); ++i) {
            c.pixels[3 * i] = c.pixels[3 * i + 1] = c.pixels[3 * i + 2] = g.pixels[i];
        }
        return c;
    }
    throw ImageError("unsupported image format (need P5/P6 PNM): " + path);
}

}  // namespace pricetag
