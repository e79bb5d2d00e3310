#include "jigsaw/snapshot.hpp"

#include <fstream>

#include "jigsaw/error.hpp"

namespace jigsaw {

PartitionDump dump_partition(const Partition& P, std::size_t t) {
  PartitionDump d;
  d.t = t;
  d.label = P.labels();
  d.size.resize(P.vertex_count());
  for (Vertex v = 0; v < P.vertex_count(); ++v) d.size[v] = static_cast<std::uint32_t>(P.cluster_size(v));
  return d;
}

Rgb Palette::color(std::uint32_t cluster_size) const {
  if (cluster_size >= red_from) return red;
  if (cluster_size >= dark_from) return dark_blue;
  if (cluster_size >= blue_from) return blue;
  return grey;
}

SnapshotImage render_snapshot(const PartitionDump& dump, const Topology& torus, const Palette& palette) {
  if (!torus.is_torus_2d()) throw UsageError("render_snapshot: requires a 2D torus");
  if (dump.size.size() != torus.size()) throw UsageError("render_snapshot: dump does not match topology");
  SnapshotImage img;
  img.width = torus.n();
  img.height = torus.n();
  img.pixels.reserve(dump.size.size());
  for (std::uint32_t s : dump.size) img.pixels.push_back(palette.color(s));
  return img;
}

void write_ppm(std::ostream& out, const SnapshotImage& img) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const auto& px : img.pixels) out.write(reinterpret_cast<const char*>(px.data()), 3);
}

void write_ppm_file(const std::string& path, const SnapshotImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_ppm(out, img);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace jigsaw
