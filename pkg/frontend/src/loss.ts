import * as tf from '@tensorflow/tfjs';

/** Mu-law tonemap T(x) = log(1 + mu*x) / log(1 + mu); T(0)=0, T(1)=1. */
export function mulaw(x: tf.Tensor, mu = 5000): tf.Tensor {
  return tf.tidy(() =>
    tf.log1p(tf.relu(x).mul(mu)).div(Math.log1p(mu))
  );
}

/**
 * Reconstruction loss: linear-domain MAE plus alpha times the MAE of the
 * mu-law tonemapped images.
 */
export function reconstructionLoss(
  pred: tf.Tensor,
  label: tf.Tensor,
  alpha = 0.2,
  mu = 5000
): tf.Scalar {
  return tf.tidy(() => {
    const linear = tf.losses.absoluteDifference(label, pred);
    const mapped = tf.losses.absoluteDifference(mulaw(label, mu), mulaw(pred, mu));
    return linear.add(mapped.mul(alpha)) as tf.Scalar;
  });
}
