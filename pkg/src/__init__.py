"""feedkal: Kalman filtering with minimum-variance output estimates under noise feed-through."""
