#include "tribench/methods.hpp"

#include <sstream>

namespace tribench {

namespace {

std::vector<Ray> sight_rays(std::span<const Camera> cameras,
                            std::span<const Pixel> pixels) {
  std::vector<Ray> rays;
  rays.reserve(cameras.size());
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    rays.push_back(line_of_sight(cameras[i], pixels[i]));
  }
  return rays;
}

std::vector<Method> build_registry() {
  std::vector<Method> methods;

  methods.push_back({"midpoint", 2, 0,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       return midpoint(sight_rays(cams, pxs));
                     }});
  methods.push_back({"midpoint-irls", 2, 0,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       return midpoint_irls(sight_rays(cams, pxs));
                     }});
  methods.push_back({"l2", 2, 2,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       return l2_twoview(cams[0], cams[1], pxs[0], pxs[1]);
                     }});
  methods.push_back({"l1", 2, 2,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       return l1_twoview(cams[0], cams[1], pxs[0], pxs[1]);
                     }});
  methods.push_back({"angular-l1", 2, 2,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       const auto rays = sight_rays(cams, pxs);
                       return angular_l1_twoview(rays[0], rays[1]);
                     }});
  methods.push_back({"angular-l2", 2, 2,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       const auto rays = sight_rays(cams, pxs);
                       return angular_l2_twoview(rays[0], rays[1]);
                     }});
  methods.push_back({"l2-refine", 2, 0,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       const Point3 init = midpoint(sight_rays(cams, pxs)).point;
                       return l2_multiview_refine(cams, pxs, init);
                     }});
  methods.push_back({"l1-irls", 2, 0,
                     [](std::span<const Camera> cams, std::span<const Pixel> pxs) {
                       const Point3 init = midpoint(sight_rays(cams, pxs)).point;
                       return l1_multiview_irls(cams, pxs, init);
                     }});
  return methods;
}

}  // namespace

const std::vector<Method>& method_registry() {
  static const std::vector<Method> registry = build_registry();
  return registry;
}

const Method& find_method(const std::string& name) {
  for (const Method& m : method_registry()) {
    if (m.name == name) return m;
  }
  throw FormatError("unknown method '" + name + "'");
}

std::vector<const Method*> select_methods(const std::string& comma_list, int n_views) {
  std::vector<const Method*> out;
  if (comma_list.empty()) {
    static const std::vector<std::string> two_view = {
        "midpoint", "midpoint-irls", "l2", "l1", "angular-l1", "angular-l2"};
    static const std::vector<std::string> n_view = {"midpoint", "midpoint-irls",
                                                    "l2-refine", "l1-irls"};
    for (const auto& name : (n_views == 2 ? two_view : n_view)) {
      out.push_back(&find_method(name));
    }
    return out;
  }
  std::istringstream in(comma_list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    const Method& m = find_method(name);
    if (!m.supports(n_views)) {
      throw FormatError("method '" + name + "' does not support " +
                        std::to_string(n_views) + " views");
    }
    out.push_back(&m);
  }
  if (out.empty()) throw FormatError("empty method list");
  return out;
}

}  // namespace tribench
