"""Certify K <= 0 region by region, then the rectangle and the mixture step."""

from radgauss.verifier import verify_all, verify_mixture_x_ge_sqrt3, verify_rectangle

print("region   status       sup          boxes")
for rep in verify_all():
    print(f"{rep.region:7s}  {rep.status:11s}  {rep.certified_sup: .3e}  {rep.boxes_processed}")

rect = verify_rectangle(delta_a=0.01)
print(f"\nrectangle [0.01, 1] x [sqrt 2, sqrt 3]: {rect.status}, sup {rect.certified_sup:.3e}, "
      f"{rect.boxes_processed} boxes, {rect.elapsed_ms / 1000:.1f} s")

mix = verify_mixture_x_ge_sqrt3(0.999, 8.0)
print(f"mixture on [0, 0.999] x [sqrt 3, 8]: {mix.status}, {mix.boxes_processed} boxes, "
      f"{mix.elapsed_ms / 1000:.1f} s")
