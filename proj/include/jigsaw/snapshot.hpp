#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "jigsaw/partition.hpp"
#include "jigsaw/topology.hpp"

namespace jigsaw {

// Per-step partition dump: cluster label (smallest member) and cluster size per vertex.
struct PartitionDump {
  std::size_t t = 0;
  std::vector<std::uint32_t> label;
  std::vector<std::uint32_t> size;
};

PartitionDump dump_partition(const Partition& P, std::size_t t);

using Rgb = std::array<std::uint8_t, 3>;

// Size classes [1, blue_from), [blue_from, dark_from), [dark_from, red_from), [red_from, inf).
struct Palette {
  std::uint32_t blue_from = 2;
  std::uint32_t dark_from = 10;
  std::uint32_t red_from = 100;
  Rgb grey{160, 160, 160};
  Rgb blue{80, 140, 230};
  Rgb dark_blue{20, 30, 140};
  Rgb red{210, 30, 30};

  Rgb color(std::uint32_t cluster_size) const;
};

struct SnapshotImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<Rgb> pixels;  // row-major, row y = 0 first
};

// Vertex (x, y) of a 2D torus becomes pixel (x, y). Non-2D topologies throw UsageError.
SnapshotImage render_snapshot(const PartitionDump& dump, const Topology& torus, const Palette& palette = {});

// Binary PPM (P6).
void write_ppm(std::ostream& out, const SnapshotImage& img);
void write_ppm_file(const std::string& path, const SnapshotImage& img);

}  // namespace jigsaw
