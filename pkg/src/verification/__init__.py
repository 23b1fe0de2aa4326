"""
Verification Bounded Context.

Central finite-difference checks of every analytic gradient in the toolkit:
topology distillation, response alignment, response box regression and the
set-prediction detection loss.
"""
