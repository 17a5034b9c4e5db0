#pragma once

#include "pricetag/image.hpp"

namespace pricetag {

// Embedded 5x7 monospaced digit font; the same glyphs back both the
// synthetic renderer and the template atlas.
inline constexpr int kFontCols = 5;
inline constexpr int kFontRows = 7;
inline constexpr const char* kFontName = "builtin-5x7";

// Row bitmaps, bit 4 = leftmost column. symbol in {'0'..'9', '.'}.
const uint8_t* font_glyph(char symbol);

// Paints the glyph scaled to the given cell (nearest-neighbor) onto a color
// canvas. The dot glyph occupies only the bottom rows of its cell.
void draw_glyph(ColorImage& canvas, char symbol, int x, int y, int cell_w, int cell_h,
                uint8_t r, uint8_t g, uint8_t b);

// Tight pixel bounds the glyph covers when drawn with draw_glyph.
Rect glyph_bounds(char symbol, int x, int y, int cell_w, int cell_h);

// Glyph rasterized alone onto a w x h binary grid (foreground = ink),
// stretched to fill the grid. Used for atlas templates.
BinaryImage rasterize_glyph(char symbol, int w, int h);

}  // namespace pricetag
