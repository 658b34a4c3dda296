# Golden values for UTM zone 16N (GRS80) forward projection, computed with PROJ via pyproj.
from pyproj import Transformer

POINTS = [
    (-87.6298, 41.8781),
    (-87.9073, 41.9742),
    (-88.2434, 40.1164),
    (-89.6501, 39.7817),
    (-87.5, 37.0),
    (-84.5, 45.0),
    (-89.9, 42.5),
    (-86.0, 30.0),
    (-87.0, 48.0),
    (-85.3, 35.0),
]

utm = Transformer.from_pipeline("+proj=utm +zone=16 +ellps=GRS80")
epsg = Transformer.from_crs("EPSG:4326", "EPSG:26916", always_xy=True)
for lon, lat in POINTS:
    e1, n1 = utm.transform(lon, lat)
    e2, n2 = epsg.transform(lon, lat)
    assert abs(e1 - e2) < 1e-6 and abs(n1 - n2) < 1e-6
    print(f"({lon!r}, {lat!r}, {e1:.6f}, {n1:.6f}),")
