"""Services package – the multiarc-graph library proper."""
